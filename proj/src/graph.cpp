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

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "gam/graph.hpp"

namespace gam {

AttributedGraph AttributedGraph::from_edges(std::size_t node_count,
                                            const std::vector<std::pair<NodeId, NodeId>>& edges,
                                            RowMatrix attrs, std::vector<TypeId> types,
                                            std::uint32_t label, std::size_t num_types) {
  if (node_count == 0) throw_data("graph has no nodes");
  if (static_cast<std::size_t>(attrs.rows()) != node_count)
    throw_data("attribute matrix has " + std::to_string(attrs.rows()) + " rows, expected " +
               std::to_string(node_count));
  if (types.size() != node_count)
    throw_data("type list has " + std::to_string(types.size()) + " entries, expected " +
               std::to_string(node_count));
  for (std::size_t v = 0; v < node_count; ++v) {
    if (types[v] >= num_types)
      throw_data("node " + std::to_string(v) + " has type index " + std::to_string(types[v]) +
                 " outside the vocabulary");
    for (Eigen::Index j = 0; j < attrs.cols(); ++j)
      if (!std::isfinite(attrs(static_cast<Eigen::Index>(v), j)))
        throw_data("node " + std::to_string(v) + " has a non-finite attribute");
  }

  AttributedGraph g;
  g.adjacency_.assign(node_count, {});
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count)
      throw_data("edge [" + std::to_string(u) + "," + std::to_string(v) + "] references a node out of range");
    if (u == v) throw_data("self-loop on node " + std::to_string(u));
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    auto& row = g.adjacency_[v];
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end())
      throw_data("duplicate edge at node " + std::to_string(v));
    if (row.empty()) throw_data("node " + std::to_string(v) + " has degree 0");
  }
  g.attrs_ = std::move(attrs);
  g.types_ = std::move(types);
  g.label_ = label;
  return g;
}

NeighborView AttributedGraph::neighbor_view(NodeId node) const {
  if (node >= adjacency_.size())
    throw_usage("node id " + std::to_string(node) + " out of range (graph has " +
                std::to_string(adjacency_.size()) + " nodes)");
  const auto& row = adjacency_[node];
  NeighborView view;
  view.neighbor_ids = row;
  view.neighbor_types.reserve(row.size());
  view.neighbor_attrs.resize(static_cast<Eigen::Index>(row.size()), attrs_.cols());
  for (std::size_t k = 0; k < row.size(); ++k) {
    view.neighbor_types.push_back(types_[row[k]]);
    view.neighbor_attrs.row(static_cast<Eigen::Index>(k)) = attrs_.row(row[k]);
  }
  return view;
}

std::size_t AttributedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& row : adjacency_) twice += row.size();
  return twice / 2;
}

std::size_t AttributedGraph::max_degree() const {
  std::size_t m = 0;
  for (const auto& row : adjacency_) m = std::max(m, row.size());
  return m;
}

AttributedGraph AttributedGraph::induced_subgraph(std::vector<NodeId> nodes) const {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  std::vector<std::int64_t> remap(adjacency_.size(), -1);
  for (std::size_t i = 0; i < nodes.size(); ++i) remap.at(nodes[i]) = static_cast<std::int64_t>(i);

  AttributedGraph sub;
  sub.adjacency_.assign(nodes.size(), {});
  sub.attrs_.resize(static_cast<Eigen::Index>(nodes.size()), attrs_.cols());
  sub.types_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    sub.attrs_.row(static_cast<Eigen::Index>(i)) = attrs_.row(nodes[i]);
    sub.types_.push_back(types_[nodes[i]]);
    for (NodeId w : adjacency_[nodes[i]])
      if (remap[w] >= 0) sub.adjacency_[i].push_back(static_cast<NodeId>(remap[w]));
  }
  sub.label_ = label_;
  return sub;
}

TypeVocabulary::TypeVocabulary(std::vector<std::string> names) : names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  for (std::size_t i = 0; i < names_.size(); ++i) index_[names_[i]] = static_cast<TypeId>(i);
}

TypeId TypeVocabulary::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw_data("unknown node type '" + name + "'");
  return it->second;
}

std::vector<std::uint32_t> Dataset::labels() const {
  std::vector<std::uint32_t> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(g.label());
  return out;
}

std::vector<std::vector<std::size_t>> Dataset::class_members() const {
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t i = 0; i < graphs.size(); ++i) members.at(graphs[i].label()).push_back(i);
  return members;
}

Dataset Dataset::subset(const std::vector<std::size_t>& ids) const {
  Dataset out;
  out.vocab = vocab;
  out.attr_dim = attr_dim;
  out.num_classes = num_classes;
  out.graphs.reserve(ids.size());
  for (std::size_t id : ids) out.graphs.push_back(graphs.at(id));
  return out;
}

bool contains_typed_path(const AttributedGraph& g, const std::vector<TypeId>& pattern) {
  if (pattern.empty()) return true;
  std::vector<char> used(g.node_count(), 0);
  std::function<bool(NodeId, std::size_t)> extend = [&](NodeId v, std::size_t k) {
    if (k == pattern.size()) return true;
    for (NodeId w : g.neighbors(v)) {
      if (used[w] || g.type(w) != pattern[k]) continue;
      used[w] = 1;
      const bool found = extend(w, k + 1);
      used[w] = 0;
      if (found) return true;
    }
    return false;
  };
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.type(v) != pattern[0]) continue;
    used[v] = 1;
    const bool found = extend(v, 1);
    used[v] = 0;
    if (found) return true;
  }
  return false;
}

}  // namespace gam
