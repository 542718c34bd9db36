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

#include "gam/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"

#ifndef GAM_VERSION
#define GAM_VERSION "0.0.0"
#endif
#ifndef GAM_GIT_REV
#define GAM_GIT_REV "unknown"
#endif

namespace gam {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

template <class T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw_usage("config key '" + key + "' has the wrong type");
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw_usage("config key '" + key + "' must be a non-negative integer");
  return j.get<std::size_t>();
}

json config_json(const ExperimentConfig& c) {
  const TrainConfig& t = c.train;
  return {
      {"dataset", c.dataset},
      {"n_graphs", c.synth.n_graphs},
      {"bg_nodes", c.synth.bg_nodes},
      {"bg_edge_prob", c.synth.bg_edge_prob},
      {"method", to_string(c.method)},
      {"steps", t.steps},
      {"samples", t.samples},
      {"gamma", t.gamma},
      {"baseline", t.use_baseline},
      {"epochs", t.epochs},
      {"lr_initial", t.lr_initial},
      {"lr_final", t.lr_final},
      {"patience", t.patience},
      {"validation_fraction", t.validation_fraction},
      {"clip_norm", t.clip_norm},
      {"mem_agents", t.mem_agents},
      {"rank_embed", t.dims.rank_embed},
      {"attr_embed", t.dims.attr_embed},
      {"step_size", t.dims.step_size},
      {"hidden", t.dims.hidden},
      {"folds", c.folds},
      {"out", c.out_dir},
      {"seed", c.seed},
      {"t_values", c.t_values},
      {"views", c.views},
      {"walk_len", c.walk_len},
      {"checkpoint_every", c.checkpoint_every},
      {"probe_type", c.probe_type},
      {"checkpoint", c.checkpoint},
      {"checkpoint_dir", c.checkpoint_dir},
  };
}

std::string hex16(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  return fs::path(cfg.out_dir) / name;
}

TrainConfig run_train_config(const ExperimentConfig& cfg, std::uint64_t run_seed) {
  TrainConfig t = cfg.train;
  t.seed = run_seed;
  return t;
}


CheckpointMeta meta_for(const ExperimentConfig& cfg, const Dataset& d, Variant v, std::size_t epoch) {
  return {v, d.vocab.names(), cfg.fingerprint(), epoch};
}

std::string checkpoint_name(std::size_t epoch) {
  std::ostringstream os;
  os << "epoch_" << std::setw(4) << std::setfill('0') << epoch << ".json";
  return os.str();
}

double fold_accuracy(const ExperimentConfig& cfg, const Dataset& d, const Fold& fold, std::size_t f) {
  const std::uint64_t run_seed = derive_seed(cfg.seed, {stream::kFold, f});
  const std::uint64_t eval_seed = derive_seed(cfg.seed, {stream::kEval, f});
  const TrainConfig tc = run_train_config(cfg, run_seed);
  switch (cfg.method) {
    case Method::Gam: {
      const TrainResult r = train(d, fold.train, tc);
      return evaluate(r.model, d, fold.test, tc.samples, tc.steps, eval_seed).accuracy;
    }
    case Method::GamMem: {
      const MemTrainResult r = train_mem(d, fold.train, tc);
      return evaluate_mem(r.model, d, fold.test, tc.mem_agents, tc.steps, eval_seed).accuracy;
    }
    case Method::AggAttr:
    case Method::AggWl: {
      const auto bm = cfg.method == Method::AggAttr ? BaselineMethod::AggAttr : BaselineMethod::AggWl;
      const BaselineModel m = fit_baseline(bm, d, fold.train, tc.validation_fraction, run_seed);
      return baseline_accuracy(m, d, fold.test);
    }
  }
  throw_usage("unknown method");
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Gam: return "gam";
    case Method::GamMem: return "gam-mem";
    case Method::AggAttr: return "agg-attr";
    case Method::AggWl: return "agg-wl";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "gam") return Method::Gam;
  if (s == "gam-mem") return Method::GamMem;
  if (s == "agg-attr") return Method::AggAttr;
  if (s == "agg-wl") return Method::AggWl;
  throw_usage("unknown method '" + s + "' (expected gam, gam-mem, agg-attr or agg-wl)");
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    const json defaults = config_json(ExperimentConfig{});
    for (const auto& [key, value] : defaults.items()) k.push_back(key);
    return k;
  }();
  return keys;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_usage(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw_usage("config must be a JSON object");
  ExperimentConfig c;
  TrainConfig& t = c.train;
  for (const auto& [key, v] : j.items()) {
    if (key == "dataset") c.dataset = get_as<std::string>(v, key);
    else if (key == "n_graphs") c.synth.n_graphs = get_count(v, key);
    else if (key == "bg_nodes") c.synth.bg_nodes = get_count(v, key);
    else if (key == "bg_edge_prob") c.synth.bg_edge_prob = get_as<double>(v, key);
    else if (key == "method") c.method = parse_method(get_as<std::string>(v, key));
    else if (key == "steps") t.steps = get_count(v, key);
    else if (key == "samples") t.samples = get_count(v, key);
    else if (key == "gamma") t.gamma = get_as<double>(v, key);
    else if (key == "baseline") t.use_baseline = get_as<bool>(v, key);
    else if (key == "epochs") t.epochs = get_count(v, key);
    else if (key == "lr_initial") t.lr_initial = get_as<double>(v, key);
    else if (key == "lr_final") t.lr_final = get_as<double>(v, key);
    else if (key == "patience") t.patience = get_count(v, key);
    else if (key == "validation_fraction") t.validation_fraction = get_as<double>(v, key);
    else if (key == "clip_norm") t.clip_norm = get_as<double>(v, key);
    else if (key == "mem_agents") t.mem_agents = get_count(v, key);
    else if (key == "rank_embed") t.dims.rank_embed = get_count(v, key);
    else if (key == "attr_embed") t.dims.attr_embed = get_count(v, key);
    else if (key == "step_size") t.dims.step_size = get_count(v, key);
    else if (key == "hidden") t.dims.hidden = get_count(v, key);
    else if (key == "folds") c.folds = get_count(v, key);
    else if (key == "out") c.out_dir = get_as<std::string>(v, key);
    else if (key == "seed") c.seed = get_as<std::uint64_t>(v, key);
    else if (key == "t_values") c.t_values = get_as<std::vector<std::size_t>>(v, key);
    else if (key == "views") c.views = get_count(v, key);
    else if (key == "walk_len") c.walk_len = get_count(v, key);
    else if (key == "checkpoint_every") c.checkpoint_every = get_count(v, key);
    else if (key == "probe_type") c.probe_type = get_as<std::string>(v, key);
    else if (key == "checkpoint") c.checkpoint = get_as<std::string>(v, key);
    else if (key == "checkpoint_dir") c.checkpoint_dir = get_as<std::string>(v, key);
    else throw_usage("unknown config key '" + key + "'");
  }
  c.synth.seed = c.seed;
  return c;
}

std::string ExperimentConfig::to_json_text() const { return config_json(*this).dump(); }

std::string ExperimentConfig::fingerprint() const {
  json j = config_json(*this);
  for (const char* k : {"out", "checkpoint", "checkpoint_dir"}) j.erase(k);
  return hex16(fnv1a64(j.dump()));
}

void ExperimentConfig::validate(const std::string& command) const {
  train.validate();
  if (dataset.empty() && (synth.n_graphs < 2 || synth.n_graphs % 2 != 0 || !(synth.bg_edge_prob > 0.0) ||
                          !(synth.bg_edge_prob < 1.0) || synth.bg_nodes < 4))
    throw_usage("synthetic data needs an even n_graphs >= 2, bg_nodes >= 4 and bg_edge_prob in (0, 1)");
  const bool agent_method = method == Method::Gam || method == Method::GamMem;
  if (command == "cv" || command == "study") {
    if (folds < 2) throw_usage("folds must be at least 2");
  }
  if ((command == "train" || command == "study") && !agent_method)
    throw_usage("'" + command + "' needs method gam or gam-mem");
  if (command == "study" && t_values.empty()) throw_usage("t_values must not be empty");
  if (command == "study")
    for (std::size_t t : t_values)
      if (t == 0) throw_usage("t_values entries must be positive");
  if (command == "partial") {
    if (method != Method::AggAttr && method != Method::AggWl) throw_usage("'partial' needs method agg-attr or agg-wl");
    if (views == 0) throw_usage("views must be positive");
    if (folds < 2) throw_usage("folds must be at least 2");
  }
  if (command == "trace" && probe_type.empty()) throw_usage("probe_type must not be empty");
}

Dataset load_or_generate(const ExperimentConfig& cfg) {
  if (!cfg.dataset.empty()) return load_dataset(cfg.dataset);
  SynthSpec s = cfg.synth;
  s.seed = cfg.seed;
  return generate_synthetic(s);
}

// ---------------------------------------------------------------------------

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::string CvReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "fold,n_test,accuracy\n";
  for (std::size_t f = 0; f < fold_accuracy.size(); ++f) os << f << ',' << fold_size[f] << ',' << fold_accuracy[f] << '\n';
  os << "mean,," << mean << '\n';
  os << "sd,," << sd << '\n';
  return os.str();
}

std::string PartialReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "fold,full,partial,diff,direction\n";
  for (const auto& r : rows) os << r.fold << ',' << r.full << ',' << r.partial << ',' << r.diff << ',' << r.marker << '\n';
  return os.str();
}

std::string StudyReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "steps,mean,sd";
  const std::size_t k = rows.empty() ? 0 : rows.front().cv.fold_accuracy.size();
  for (std::size_t f = 0; f < k; ++f) os << ",fold_" << f;
  os << '\n';
  for (const auto& r : rows) {
    os << r.steps << ',' << r.cv.mean << ',' << r.cv.sd;
    for (double a : r.cv.fold_accuracy) os << ',' << a;
    os << '\n';
  }
  return os.str();
}

std::string RankTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "epoch,probe_type";
  for (const auto& n : type_names) os << ",rank_" << n;
  os << '\n';
  for (const auto& r : rows) {
    os << r.epoch << ',' << probe_type;
    for (Eigen::Index k = 0; k < r.rank.size(); ++k) os << ',' << r.rank(k);
    os << '\n';
  }
  return os.str();
}

Vec probe_rank(const GamModel& model, const Vec& probe_attrs) {
  const ModelDims& dims = model.dims();
  const RankVector r0 = Vec::Constant(idx(dims.num_types), 1.0 / static_cast<double>(dims.num_types));
  const HistoryState zero{Vec::Zero(idx(dims.hidden)), Vec::Zero(idx(dims.hidden))};
  const HistoryState h1 = core_update(model, step_embed(model, probe_attrs, r0), zero);
  return rank_forward(model, h1.h);
}

Vec probe_attributes(const Dataset& d, const std::string& probe_type) {
  const TypeId type = d.vocab.index(probe_type);
  for (const auto& g : d.graphs)
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (g.type(v) == type) return g.attrs().row(v).transpose();
  throw_data("no node of type '" + probe_type + "' in the dataset");
}

// ---------------------------------------------------------------------------

Dataset cmd_synth(const ExperimentConfig& cfg) {
  cfg.validate("synth");
  SynthSpec s = cfg.synth;
  s.seed = cfg.seed;
  Dataset d = generate_synthetic(s);
  save_dataset(d, out_path(cfg, "dataset.json").string());
  return d;
}

TrainReport cmd_train(const ExperimentConfig& cfg) {
  cfg.validate("train");
  const Dataset d = load_or_generate(cfg);
  const TrainConfig tc = run_train_config(cfg, derive_seed(cfg.seed, {stream::kEpoch}));
  const fs::path ck_dir = out_path(cfg, "checkpoints");
  if (cfg.checkpoint_every > 0) fs::create_directories(ck_dir);
  std::string trace = trace_csv_header(d.vocab.size());
  const Variant variant = cfg.method == Method::GamMem ? Variant::GamMem : Variant::Gam;

  auto periodic = [&](std::size_t epoch, const GamModel& base, const MemModel* mem) {
    if (cfg.checkpoint_every == 0 || epoch % cfg.checkpoint_every != 0) return;
    const std::string path = (ck_dir / checkpoint_name(epoch)).string();
    if (mem)
      save_checkpoint(path, *mem, meta_for(cfg, d, variant, epoch));
    else
      save_checkpoint(path, base, meta_for(cfg, d, variant, epoch));
    Rng rng(derive_seed(cfg.seed, {stream::kAgent, epoch}));
    trace += trace_csv_rows(epoch, rollout(base, d.graphs.front(), d.graphs.front().label(), tc.steps, rng),
                            d.vocab.names());
  };

  TrainReport report;
  if (cfg.method == Method::GamMem) {
    const MemTrainResult r = train_mem(d, tc, [&](std::size_t e, const MemModel& m) { periodic(e, m.base, &m); });
    save_checkpoint(out_path(cfg, "model.json").string(), r.model, meta_for(cfg, d, variant, r.report.best_epoch));
    report = r.report;
  } else {
    const TrainResult r = train(d, tc, [&](std::size_t e, const GamModel& m) { periodic(e, m, nullptr); });
    save_checkpoint(out_path(cfg, "model.json").string(), r.model, meta_for(cfg, d, variant, r.report.best_epoch));
    report = r.report;
  }
  write_file(out_path(cfg, "train_report.csv").string(), report.to_csv());
  write_file(out_path(cfg, "episode_trace.csv").string(), trace);
  return report;
}

EvalResult cmd_eval(const ExperimentConfig& cfg) {
  cfg.validate("eval");
  const Dataset d = load_or_generate(cfg);
  const std::string path = cfg.checkpoint.empty() ? (fs::path(cfg.out_dir) / "model.json").string() : cfg.checkpoint;
  const Checkpoint ck = load_checkpoint(path);
  if (ck.meta.vocab != d.vocab.names()) throw_data("checkpoint vocabulary does not match the dataset");
  const ModelDims& dims = ck.model.base.dims();
  if (dims.attr_dim != d.attr_dim || dims.num_classes != d.num_classes)
    throw_data("checkpoint dimensions do not match the dataset");
  std::vector<std::size_t> ids(d.size());
  std::iota(ids.begin(), ids.end(), 0);
  const std::uint64_t seed = derive_seed(cfg.seed, {stream::kEval});
  const EvalResult r = ck.meta.variant == Variant::GamMem
                           ? evaluate_mem(ck.model, d, ids, cfg.train.mem_agents, cfg.train.steps, seed)
                           : evaluate(ck.model.base, d, ids, cfg.train.samples, cfg.train.steps, seed);
  std::ostringstream os;
  os << "graph_id,label,predicted\n";
  for (std::size_t i = 0; i < ids.size(); ++i) os << ids[i] << ',' << d.graphs[ids[i]].label() << ',' << r.predictions[i] << '\n';
  write_file(out_path(cfg, "eval.csv").string(), os.str());
  return r;
}

CvReport cmd_cv(const ExperimentConfig& cfg, const Dataset& d) {
  cfg.validate("cv");
  const auto t0 = std::chrono::steady_clock::now();
  const auto folds = kfold_split(d, cfg.folds, derive_seed(cfg.seed, {stream::kFold}));
  CvReport rep;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    rep.fold_accuracy.push_back(fold_accuracy(cfg, d, folds[f], f));
    rep.fold_size.push_back(folds[f].test.size());
  }
  rep.mean = mean_of(rep.fold_accuracy);
  rep.sd = sample_sd(rep.fold_accuracy);
  rep.fingerprint = cfg.fingerprint();
  rep.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

CvReport cmd_cv(const ExperimentConfig& cfg) {
  const CvReport rep = cmd_cv(cfg, load_or_generate(cfg));
  write_file(out_path(cfg, "cv.csv").string(), rep.to_csv());
  return rep;
}

RankTrace cmd_trace(const ExperimentConfig& cfg) {
  cfg.validate("trace");
  const fs::path dir = cfg.checkpoint_dir.empty() ? fs::path(cfg.out_dir) / "checkpoints" : fs::path(cfg.checkpoint_dir);
  std::vector<fs::path> files;
  if (fs::is_directory(dir))
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (entry.is_regular_file() && name.rfind("epoch_", 0) == 0 && entry.path().extension() == ".json")
        files.push_back(entry.path());
    }
  if (files.empty()) throw_data("no checkpoints found in '" + dir.string() + "'");

  std::vector<Checkpoint> cks;
  for (const auto& p : files) cks.push_back(load_checkpoint(p.string()));
  std::sort(cks.begin(), cks.end(), [](const Checkpoint& a, const Checkpoint& b) { return a.meta.epoch < b.meta.epoch; });

  const Dataset d = load_or_generate(cfg);
  if (cks.front().meta.vocab != d.vocab.names()) throw_data("checkpoint vocabulary does not match the dataset");
  const Vec attrs = probe_attributes(d, cfg.probe_type);

  RankTrace trace;
  trace.type_names = d.vocab.names();
  trace.probe_type = cfg.probe_type;
  for (const auto& ck : cks) {
    if (ck.meta.vocab != trace.type_names) throw_data("checkpoints disagree on the type vocabulary");
    trace.rows.push_back({ck.meta.epoch, probe_rank(ck.model.base, attrs)});
  }
  write_file(out_path(cfg, "rank_trace.csv").string(), trace.to_csv());
  return trace;
}

StudyReport cmd_study(const ExperimentConfig& cfg) {
  cfg.validate("study");
  const Dataset d = load_or_generate(cfg);
  StudyReport rep;
  for (std::size_t steps : cfg.t_values) {
    ExperimentConfig c = cfg;
    c.train.steps = steps;
    rep.rows.push_back({steps, cmd_cv(c, d)});
  }
  write_file(out_path(cfg, "study.csv").string(), rep.to_csv());
  return rep;
}

PartialReport cmd_partial(const ExperimentConfig& cfg) {
  cfg.validate("partial");
  const Dataset d = load_or_generate(cfg);
  const auto folds = kfold_split(d, cfg.folds, derive_seed(cfg.seed, {stream::kFold}));
  const auto bm = cfg.method == Method::AggAttr ? BaselineMethod::AggAttr : BaselineMethod::AggWl;
  PartialReport rep;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const std::uint64_t run_seed = derive_seed(cfg.seed, {stream::kFold, f});
    const BaselineModel m = fit_baseline(bm, d, folds[f].train, cfg.train.validation_fraction, run_seed);
    PartialRow row;
    row.fold = f;
    row.full = baseline_accuracy(m, d, folds[f].test);
    row.partial = baseline_partial_accuracy(m, d, folds[f].test, cfg.views, cfg.walk_len,
                                            derive_seed(cfg.seed, {stream::kView, f}));
    row.diff = row.full - row.partial;
    row.marker = row.diff > 0.0 ? "↓" : (row.diff < 0.0 ? "↑" : "=");
    rep.rows.push_back(row);
  }
  write_file(out_path(cfg, "partial.csv").string(), rep.to_csv());
  return rep;
}

std::string build_fingerprint() {
  std::string s = std::string("gam ") + GAM_VERSION + " rev " + GAM_GIT_REV;
#if defined(__clang__)
  s += " clang " __clang_version__;
#elif defined(__GNUC__)
  s += " gcc " __VERSION__;
#endif
  return s;
}

std::string run_command(const std::string& command, const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  json summary = json::object();
  std::vector<std::string> outputs;
  if (command == "synth") {
    const Dataset d = cmd_synth(cfg);
    summary = {{"graphs", d.size()}, {"num_types", d.vocab.size()}, {"attr_dim", d.attr_dim}};
    outputs = {"dataset.json"};
  } else if (command == "train") {
    const TrainReport r = cmd_train(cfg);
    summary = {{"epochs_run", r.epochs.size()}, {"best_epoch", r.best_epoch}, {"best_val_acc", r.best_val_acc}};
    outputs = {"model.json", "train_report.csv", "episode_trace.csv"};
    if (cfg.checkpoint_every > 0) outputs.push_back("checkpoints/");
  } else if (command == "eval") {
    const EvalResult r = cmd_eval(cfg);
    summary = {{"accuracy", r.accuracy}, {"correct", r.correct}, {"total", r.total}};
    outputs = {"eval.csv"};
  } else if (command == "cv") {
    const CvReport r = cmd_cv(cfg);
    summary = {{"fold_accuracy", r.fold_accuracy}, {"mean", r.mean}, {"sd", r.sd}};
    outputs = {"cv.csv"};
  } else if (command == "trace") {
    const RankTrace r = cmd_trace(cfg);
    json last = json::object();
    for (std::size_t k = 0; k < r.type_names.size(); ++k) last[r.type_names[k]] = r.rows.back().rank(idx(k));
    summary = {{"checkpoints", r.rows.size()}, {"last_epoch", r.rows.back().epoch}, {"last_rank", last}};
    outputs = {"rank_trace.csv"};
  } else if (command == "study") {
    const StudyReport r = cmd_study(cfg);
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back({{"steps", row.steps}, {"mean", row.cv.mean}, {"sd", row.cv.sd}});
    summary = {{"rows", rows}};
    outputs = {"study.csv"};
  } else if (command == "partial") {
    const PartialReport r = cmd_partial(cfg);
    std::size_t worse = 0;
    for (const auto& row : r.rows) worse += row.diff > 0.0 ? 1 : 0;
    summary = {{"folds", r.rows.size()}, {"folds_partial_worse", worse}};
    outputs = {"partial.csv"};
  } else {
    throw_usage("unknown command '" + command + "'");
  }
  json manifest = {
      {"command", command},
      {"config", config_json(cfg)},
      {"config_fingerprint", cfg.fingerprint()},
      {"seed", cfg.seed},
      {"build", build_fingerprint()},
      {"wall_clock_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
      {"outputs", outputs},
      {"summary", summary},
  };
  const std::string text = manifest.dump(2);
  write_file(out_path(cfg, "manifest_" + command + ".json").string(), text + "\n");
  return text;
}

}  // namespace gam
