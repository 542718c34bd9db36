// Copyright 2026 The GAM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gam/gam.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "gam/experiment.hpp"

struct gam_dataset {
  gam::Dataset data;
};

struct gam_model {
  gam::Checkpoint ck;
};

namespace {

thread_local std::string last_error;

gam_status fail(gam_status s, const char* msg) {
  last_error = msg;
  return s;
}

// Runs `fn`, mapping exceptions onto status codes.
template <class F>
gam_status guarded(F&& fn) {
  try {
    fn();
    last_error.clear();
    return GAM_OK;
  } catch (const gam::Error& e) {
    return fail(static_cast<gam_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(GAM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(GAM_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(GAM_ERR_RUNTIME, "unknown failure");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) gam::throw_usage(std::string(what) + " must not be null");
}

}  // namespace

extern "C" {

const char* gam_version(void) {
#ifdef GAM_VERSION
  return GAM_VERSION;
#else
  return "0.0.0";
#endif
}

const char* gam_last_error(void) { return last_error.c_str(); }

void gam_string_free(char* s) { std::free(s); }

gam_status gam_dataset_load(const char* path, gam_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gam_dataset{gam::load_dataset(path)};
  });
}

gam_status gam_dataset_parse(const char* json_text, gam_dataset** out) {
  return guarded([&] {
    require(json_text, "json_text");
    require(out, "out");
    *out = new gam_dataset{gam::parse_dataset(json_text)};
  });
}

gam_status gam_dataset_synthesize(size_t n_graphs, size_t bg_nodes, double bg_edge_prob, uint64_t seed,
                                  gam_dataset** out) {
  return guarded([&] {
    require(out, "out");
    gam::SynthSpec s;
    s.n_graphs = n_graphs;
    s.bg_nodes = bg_nodes;
    s.bg_edge_prob = bg_edge_prob;
    s.seed = seed;
    *out = new gam_dataset{gam::generate_synthetic(s)};
  });
}

gam_status gam_dataset_save(const gam_dataset* d, const char* path) {
  return guarded([&] {
    require(d, "dataset");
    require(path, "path");
    gam::save_dataset(d->data, path);
  });
}

size_t gam_dataset_size(const gam_dataset* d) { return d ? d->data.size() : 0; }
size_t gam_dataset_num_types(const gam_dataset* d) { return d ? d->data.vocab.size() : 0; }
size_t gam_dataset_num_classes(const gam_dataset* d) { return d ? d->data.num_classes : 0; }

gam_status gam_dataset_graph_info(const gam_dataset* d, size_t graph, size_t* nodes, size_t* edges, uint32_t* label) {
  return guarded([&] {
    require(d, "dataset");
    if (graph >= d->data.size()) gam::throw_usage("graph index out of range");
    const auto& g = d->data.graphs[graph];
    if (nodes) *nodes = g.node_count();
    if (edges) *edges = g.edge_count();
    if (label) *label = g.label();
  });
}

void gam_dataset_free(gam_dataset* d) { delete d; }

gam_status gam_model_load(const char* path, gam_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new gam_model{gam::load_checkpoint(path)};
  });
}

int gam_model_is_memory(const gam_model* m) { return m && m->ck.meta.variant == gam::Variant::GamMem ? 1 : 0; }

gam_status gam_model_predict(const gam_model* m, const gam_dataset* d, size_t graph, size_t agents, size_t steps,
                             uint64_t seed, uint32_t* label, double* probs, size_t probs_len) {
  return guarded([&] {
    require(m, "model");
    require(d, "dataset");
    require(label, "label");
    if (graph >= d->data.size()) gam::throw_usage("graph index out of range");
    if (agents == 0 || steps == 0) gam::throw_usage("agents and steps must be positive");
    if (m->ck.meta.vocab != d->data.vocab.names()) gam::throw_data("model vocabulary does not match the dataset");
    const auto& dims = m->ck.model.base.dims();
    if (dims.attr_dim != d->data.attr_dim) gam::throw_data("model attribute size does not match the dataset");
    auto rngs = gam::agent_rngs(seed, graph, agents);
    gam::Vec p;
    if (m->ck.meta.variant == gam::Variant::GamMem) {
      const auto r = gam::mem_predict(m->ck.model, d->data.graphs[graph], steps, rngs);
      *label = r.label;
      p = r.probs;
    } else {
      const auto r = gam::predict(m->ck.model.base, d->data.graphs[graph], steps, rngs);
      *label = r.label;
      p = r.probs;
    }
    if (probs) {
      if (probs_len < static_cast<size_t>(p.size())) gam::throw_usage("probs buffer too small");
      for (Eigen::Index i = 0; i < p.size(); ++i) probs[i] = p(i);
    }
  });
}

void gam_model_free(gam_model* m) { delete m; }

gam_status gam_run(const char* command, const char* config_json, char** manifest_json) {
  return guarded([&] {
    require(command, "command");
    const auto cfg = gam::ExperimentConfig::from_json_text(config_json ? config_json : "{}");
    const std::string manifest = gam::run_command(command, cfg);
    if (manifest_json) *manifest_json = dup(manifest);
  });
}

gam_status gam_config_keys(char** keys_json) {
  return guarded([&] {
    require(keys_json, "keys_json");
    std::string s = "[";
    for (const auto& k : gam::config_keys()) s += (s.size() > 1 ? ",\"" : "\"") + k + "\"";
    *keys_json = dup(s + "]");
  });
}

gam_status gam_config_resolve(const char* config_json, char** resolved_json) {
  return guarded([&] {
    require(resolved_json, "resolved_json");
    *resolved_json = dup(gam::ExperimentConfig::from_json_text(config_json ? config_json : "{}").to_json_text());
  });
}

}  // extern "C"
