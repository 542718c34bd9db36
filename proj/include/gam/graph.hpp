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

#ifndef GAM_GRAPH_HPP
#define GAM_GRAPH_HPP

#include <Eigen/Core>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gam/common.hpp"

namespace gam {

using NodeId = std::uint32_t;
using TypeId = std::uint32_t;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// One-hop neighborhood of a node: ids, types and the attribute rows of the
/// neighbors, in ascending id order. At most max-degree x D values.
struct NeighborView {
  std::vector<NodeId> neighbor_ids;
  std::vector<TypeId> neighbor_types;
  RowMatrix neighbor_attrs;

  std::size_t size() const { return neighbor_ids.size(); }
};

/// The only graph surface a walking agent is given. Implementations may load
/// neighborhoods lazily; the agent never sees the whole graph.
class GraphAccess {
 public:
  virtual ~GraphAccess() = default;
  virtual std::size_t node_count() const = 0;
  virtual NeighborView neighbor_view(NodeId node) const = 0;
};

/// Simple undirected graph with typed, attributed nodes and a class label.
/// Immutable once constructed.
class AttributedGraph final : public GraphAccess {
 public:
  AttributedGraph() = default;

  /// Builds a graph from an undirected edge list (each edge once, either
  /// orientation). Throws Error(Data) on self-loops, duplicate edges, ids out
  /// of range, degree-0 nodes, ragged or non-finite attributes, or type ids
  /// outside [0, num_types).
  static AttributedGraph from_edges(std::size_t node_count,
                                    const std::vector<std::pair<NodeId, NodeId>>& edges,
                                    RowMatrix attrs, std::vector<TypeId> types, std::uint32_t label,
                                    std::size_t num_types);

  std::size_t node_count() const override { return adjacency_.size(); }
  NeighborView neighbor_view(NodeId node) const override;

  const std::vector<NodeId>& neighbors(NodeId node) const { return adjacency_.at(node); }
  const std::vector<std::vector<NodeId>>& adjacency() const { return adjacency_; }
  const RowMatrix& attrs() const { return attrs_; }
  const std::vector<TypeId>& types() const { return types_; }
  TypeId type(NodeId node) const { return types_.at(node); }
  std::uint32_t label() const { return label_; }
  std::size_t attr_dim() const { return static_cast<std::size_t>(attrs_.cols()); }
  std::size_t edge_count() const;
  std::size_t max_degree() const;

  /// Induced subgraph over `nodes` (deduplicated, kept in ascending order).
  /// Nodes left without neighbors are kept; the result is for featurizers and
  /// is not re-validated.
  AttributedGraph induced_subgraph(std::vector<NodeId> nodes) const;

 private:
  std::vector<std::vector<NodeId>> adjacency_;
  RowMatrix attrs_;
  std::vector<TypeId> types_;
  std::uint32_t label_ = 0;
};

/// Ordered set of node type names. Indices follow lexicographic name order.
class TypeVocabulary {
 public:
  TypeVocabulary() = default;
  explicit TypeVocabulary(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(TypeId id) const { return names_.at(id); }
  /// Throws Error(Data) for unknown names.
  TypeId index(const std::string& name) const;
  bool contains(const std::string& name) const { return index_.count(name) != 0; }

 private:
  std::vector<std::string> names_;
  std::map<std::string, TypeId> index_;
};

struct Dataset {
  std::vector<AttributedGraph> graphs;
  TypeVocabulary vocab;
  std::size_t attr_dim = 0;
  std::size_t num_classes = 0;

  std::size_t size() const { return graphs.size(); }
  std::vector<std::uint32_t> labels() const;
  /// Per-class member ids in ascending order.
  std::vector<std::vector<std::size_t>> class_members() const;
  Dataset subset(const std::vector<std::size_t>& ids) const;
};

/// Parses the JSON dataset format and validates every invariant. Error
/// messages name the offending graph (and node, where relevant).
Dataset parse_dataset(const std::string& json_text);
Dataset load_dataset(const std::string& path);
std::string dataset_to_json(const Dataset& d);
void save_dataset(const Dataset& d, const std::string& path);

struct SynthSpec {
  std::size_t n_graphs = 500;
  std::size_t bg_nodes = 10;
  double bg_edge_prob = 0.1;
  std::uint64_t seed = 0;
};

/// Random graphs with one embedded typed 3-path: A-B-C-D in positives
/// (label 1), A-B-E-D in negatives (label 0). Attributes are one-hot types.
Dataset generate_synthetic(const SynthSpec& spec);

/// Exactly n / L graphs per class, drawn without replacement.
Dataset balanced_subsample(const Dataset& d, std::size_t n, std::uint64_t seed);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Stratified k-fold split of the ids 0..d.size()-1.
std::vector<Fold> kfold_split(const Dataset& d, std::size_t k, std::uint64_t seed);
std::vector<Fold> kfold_split(const std::vector<std::uint32_t>& labels, std::size_t num_classes,
                              std::size_t k, std::uint64_t seed);

/// Stratified holdout of roughly `fraction` of `ids` (at least one per class
/// that has two or more members). Returns {kept, held_out}.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout(
    const std::vector<std::size_t>& ids, const std::vector<std::uint32_t>& labels, double fraction,
    std::uint64_t seed);

/// True if the graph has a simple path whose node types read `pattern` in
/// order. Exhaustive search; intended for small graphs and tests.
bool contains_typed_path(const AttributedGraph& g, const std::vector<TypeId>& pattern);

}  // namespace gam

#endif  // GAM_GRAPH_HPP
