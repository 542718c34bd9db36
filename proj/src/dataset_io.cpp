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

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "gam/graph.hpp"

namespace gam {

using nlohmann::json;

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw_data(where + ": missing field '" + key + "'");
  return obj.at(key);
}

std::int64_t require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) throw_data(where + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

Dataset parse_dataset(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw_data(std::string("dataset parse failure: ") + e.what());
  }
  if (!doc.is_object()) throw_data("dataset: top level must be an object");

  const std::int64_t attr_dim = require_int(doc, "attr_dim", "dataset");
  const std::int64_t num_classes = require_int(doc, "num_classes", "dataset");
  if (attr_dim < 1) throw_data("dataset: attr_dim must be positive");
  if (num_classes < 1) throw_data("dataset: num_classes must be positive");
  const json& graphs = require(doc, "graphs", "dataset");
  if (!graphs.is_array()) throw_data("dataset: 'graphs' must be an array");

  // First pass collects type names so the vocabulary is known up front.
  std::set<std::string> type_names;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const std::string where = "graph " + std::to_string(gi);
    const json& nodes = require(graphs[gi], "nodes", where);
    if (!nodes.is_array()) throw_data(where + ": 'nodes' must be an array");
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      const json& t = require(nodes[v], "type", where + " node " + std::to_string(v));
      if (!t.is_string()) throw_data(where + " node " + std::to_string(v) + ": 'type' must be a string");
      type_names.insert(t.get<std::string>());
    }
  }

  Dataset d;
  d.vocab = TypeVocabulary(std::vector<std::string>(type_names.begin(), type_names.end()));
  d.attr_dim = static_cast<std::size_t>(attr_dim);
  d.num_classes = static_cast<std::size_t>(num_classes);
  d.graphs.reserve(graphs.size());

  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const std::string where = "graph " + std::to_string(gi);
    const json& jg = graphs[gi];
    const std::int64_t label = require_int(jg, "label", where);
    if (label < 0 || label >= num_classes)
      throw_data(where + ": label " + std::to_string(label) + " outside [0, num_classes)");
    const json& nodes = jg.at("nodes");
    const json& edges = require(jg, "edges", where);
    if (!edges.is_array()) throw_data(where + ": 'edges' must be an array");

    RowMatrix attrs(static_cast<Eigen::Index>(nodes.size()), attr_dim);
    std::vector<TypeId> types;
    types.reserve(nodes.size());
    for (std::size_t v = 0; v < nodes.size(); ++v) {
      const std::string nwhere = where + " node " + std::to_string(v);
      const json& a = require(nodes[v], "attrs", nwhere);
      if (!a.is_array() || a.size() != static_cast<std::size_t>(attr_dim))
        throw_data(nwhere + ": 'attrs' must hold exactly " + std::to_string(attr_dim) + " numbers");
      for (std::size_t j = 0; j < a.size(); ++j) {
        if (!a[j].is_number()) throw_data(nwhere + ": non-numeric attribute");
        attrs(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(j)) = a[j].get<double>();
      }
      types.push_back(d.vocab.index(nodes[v].at("type").get<std::string>()));
    }

    std::vector<std::pair<NodeId, NodeId>> edge_list;
    edge_list.reserve(edges.size());
    for (const json& e : edges) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw_data(where + ": each edge must be a pair of integer node ids");
      const auto u = e[0].get<std::int64_t>();
      const auto v = e[1].get<std::int64_t>();
      if (u < 0 || v < 0) throw_data(where + ": negative node id in edge");
      edge_list.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }

    try {
      d.graphs.push_back(AttributedGraph::from_edges(nodes.size(), edge_list, std::move(attrs),
                                                     std::move(types), static_cast<std::uint32_t>(label),
                                                     d.vocab.size()));
    } catch (const Error& e) {
      throw_data(where + ": " + e.what());
    }
  }
  return d;
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open dataset file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dataset(ss.str());
}

std::string dataset_to_json(const Dataset& d) {
  json doc;
  doc["attr_dim"] = d.attr_dim;
  doc["num_classes"] = d.num_classes;
  json graphs = json::array();
  for (const auto& g : d.graphs) {
    json jg;
    jg["label"] = g.label();
    json nodes = json::array();
    for (NodeId v = 0; v < g.node_count(); ++v) {
      json attrs = json::array();
      for (Eigen::Index j = 0; j < g.attrs().cols(); ++j) attrs.push_back(g.attrs()(v, j));
      nodes.push_back({{"type", d.vocab.name(g.type(v))}, {"attrs", std::move(attrs)}});
    }
    json edges = json::array();
    for (NodeId u = 0; u < g.node_count(); ++u)
      for (NodeId v : g.neighbors(u))
        if (u < v) edges.push_back({u, v});
    jg["nodes"] = std::move(nodes);
    jg["edges"] = std::move(edges);
    graphs.push_back(std::move(jg));
  }
  doc["graphs"] = std::move(graphs);
  return doc.dump();
}

void save_dataset(const Dataset& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_runtime("cannot write dataset file '" + path + "'");
  out << dataset_to_json(d) << '\n';
  if (!out) throw_runtime("write failed for '" + path + "'");
}

}  // namespace gam
