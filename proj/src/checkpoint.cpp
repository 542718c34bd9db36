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

#include "gam/checkpoint.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace gam {

namespace {

using json = nlohmann::json;

json dims_to_json(const ModelDims& d) {
  return {{"num_types", d.num_types},   {"attr_dim", d.attr_dim},     {"num_classes", d.num_classes},
          {"rank_embed", d.rank_embed}, {"attr_embed", d.attr_embed}, {"step_size", d.step_size},
          {"hidden", d.hidden}};
}

ModelDims dims_from_json(const json& j) {
  ModelDims d;
  d.num_types = j.at("num_types").get<std::size_t>();
  d.attr_dim = j.at("attr_dim").get<std::size_t>();
  d.num_classes = j.at("num_classes").get<std::size_t>();
  d.rank_embed = j.at("rank_embed").get<std::size_t>();
  d.attr_embed = j.at("attr_embed").get<std::size_t>();
  d.step_size = j.at("step_size").get<std::size_t>();
  d.hidden = j.at("hidden").get<std::size_t>();
  return d;
}

json block_to_json(const nn::ParamRef& p) {
  json values = json::array();
  for (Eigen::Index r = 0; r < p.rows; ++r)
    for (Eigen::Index c = 0; c < p.cols; ++c) values.push_back(p.value[static_cast<std::size_t>(c * p.rows + r)]);
  return {{"shape", {p.rows, p.cols}}, {"values", std::move(values)}};
}

std::string to_json_text(std::vector<nn::ParamRef> params, const ModelDims& dims, const CheckpointMeta& meta) {
  json doc;
  doc["format"] = kCheckpointFormat;
  doc["variant"] = to_string(meta.variant);
  doc["dims"] = dims_to_json(dims);
  doc["vocab"] = meta.vocab;
  doc["config_fingerprint"] = meta.config_fingerprint;
  doc["epoch"] = meta.epoch;
  json blocks = json::object();
  for (const auto& p : params) blocks[p.name] = block_to_json(p);
  doc["blocks"] = std::move(blocks);
  return doc.dump();
}

void load_block(const json& blocks, const nn::ParamRef& p) {
  if (!blocks.contains(p.name)) throw_data("checkpoint is missing block '" + p.name + "'");
  const json& b = blocks.at(p.name);
  const auto shape = b.at("shape").get<std::vector<Eigen::Index>>();
  if (shape.size() != 2 || shape[0] != p.rows || shape[1] != p.cols)
    throw_data("checkpoint block '" + p.name + "' has the wrong shape");
  const auto values = b.at("values").get<std::vector<double>>();
  if (values.size() != p.size()) throw_data("checkpoint block '" + p.name + "' has the wrong value count");
  for (Eigen::Index r = 0; r < p.rows; ++r)
    for (Eigen::Index c = 0; c < p.cols; ++c)
      p.value[static_cast<std::size_t>(c * p.rows + r)] = values[static_cast<std::size_t>(r * p.cols + c)];
}

}  // namespace

std::string to_string(Variant v) { return v == Variant::Gam ? "gam" : "gam-mem"; }

Variant parse_variant(const std::string& s) {
  if (s == "gam") return Variant::Gam;
  if (s == "gam-mem") return Variant::GamMem;
  throw_usage("unknown model variant '" + s + "'");
}

std::string checkpoint_to_json(const GamModel& model, const CheckpointMeta& meta) {
  if (meta.variant != Variant::Gam) throw_usage("a GAM model must be saved with variant 'gam'");
  GamModel copy = model;  // params() hands out mutable views
  return to_json_text(copy.params(), model.dims(), meta);
}

std::string checkpoint_to_json(const MemModel& model, const CheckpointMeta& meta) {
  if (meta.variant != Variant::GamMem) throw_usage("a memory model must be saved with variant 'gam-mem'");
  MemModel copy = model;
  return to_json_text(copy.params(), model.base.dims(), meta);
}

Checkpoint parse_checkpoint(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw_data(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kCheckpointFormat) throw_data("unsupported checkpoint format");
    Checkpoint ck;
    ck.meta.variant = parse_variant(doc.at("variant").get<std::string>());
    ck.meta.vocab = doc.at("vocab").get<std::vector<std::string>>();
    ck.meta.config_fingerprint = doc.at("config_fingerprint").get<std::string>();
    ck.meta.epoch = doc.value("epoch", std::size_t{0});
    const ModelDims dims = dims_from_json(doc.at("dims"));
    if (ck.meta.vocab.size() != dims.num_types) throw_data("checkpoint vocabulary does not match num_types");
    ck.model = MemModel(dims, 0);
    const json& blocks = doc.at("blocks");
    auto params = ck.meta.variant == Variant::Gam ? ck.model.base.params() : ck.model.params();
    for (const auto& p : params) load_block(blocks, p);
    return ck;
  } catch (const json::exception& e) {
    throw_data(std::string("malformed checkpoint: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Usage) throw_data(e.what());
    throw;
  }
}

void save_checkpoint(const std::string& path, const GamModel& model, const CheckpointMeta& meta) {
  write_file(path, checkpoint_to_json(model, meta) + "\n");
}

void save_checkpoint(const std::string& path, const MemModel& model, const CheckpointMeta& meta) {
  write_file(path, checkpoint_to_json(model, meta) + "\n");
}

Checkpoint load_checkpoint(const std::string& path) { return parse_checkpoint(read_file(path)); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_runtime("cannot write '" + path + "'");
  out << contents;
  if (!out) throw_runtime("write failed for '" + path + "'");
}

}  // namespace gam
