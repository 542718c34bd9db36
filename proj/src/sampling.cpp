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
#include <numeric>

#include "gam/graph.hpp"

namespace gam {

namespace {

constexpr TypeId kA = 0, kB = 1, kC = 2, kD = 3, kE = 4;
constexpr std::size_t kPatternNodes = 4;

AttributedGraph synth_graph(const SynthSpec& spec, bool positive, Rng& rng) {
  const std::size_t n = spec.bg_nodes + kPatternNodes;
  std::vector<TypeId> types = {kA, kB, positive ? kC : kE, kD};
  for (std::size_t i = 0; i < spec.bg_nodes; ++i) types.push_back(static_cast<TypeId>(rng.uniform_index(5)));

  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  auto add = [&](std::size_t u, std::size_t v) { adj[u][v] = adj[v][u] = 1; };
  add(0, 1);
  add(1, 2);
  add(2, 3);
  // Erdos-Renyi over every pair that involves a background node; the pattern
  // itself stays a bare path.
  bool bridged = false;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = std::max(u + 1, kPatternNodes); v < n; ++v)
      if (rng.uniform() < spec.bg_edge_prob) {
        add(u, v);
        if (u < kPatternNodes) bridged = true;
      }
  if (!bridged) add(rng.uniform_index(kPatternNodes), kPatternNodes + rng.uniform_index(spec.bg_nodes));
  for (std::size_t u = kPatternNodes; u < n; ++u) {
    if (std::find(adj[u].begin(), adj[u].end(), 1) != adj[u].end()) continue;
    std::size_t w = rng.uniform_index(n - 1);
    if (w >= u) ++w;
    add(u, w);
  }

  // Hide the pattern's position behind a random relabeling.
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  std::vector<TypeId> out_types(n);
  RowMatrix attrs = RowMatrix::Zero(static_cast<Eigen::Index>(n), 5);
  for (std::size_t u = 0; u < n; ++u) {
    out_types[perm[u]] = types[u];
    attrs(perm[u], types[u]) = 1.0;
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (adj[u][v]) edges.emplace_back(perm[u], perm[v]);
  return AttributedGraph::from_edges(n, edges, std::move(attrs), std::move(out_types), positive ? 1 : 0, 5);
}

}  // namespace

Dataset generate_synthetic(const SynthSpec& spec) {
  if (spec.n_graphs == 0 || spec.n_graphs % 2 != 0) throw_usage("n_graphs must be a positive even number");
  if (spec.bg_nodes < 4) throw_usage("bg_nodes must be at least 4");
  if (!(spec.bg_edge_prob > 0.0 && spec.bg_edge_prob < 1.0))
    throw_usage("bg_edge_prob must lie in (0, 1)");

  Dataset d;
  d.vocab = TypeVocabulary({"A", "B", "C", "D", "E"});
  d.attr_dim = 5;
  d.num_classes = 2;
  d.graphs.reserve(spec.n_graphs);
  for (std::size_t i = 0; i < spec.n_graphs; ++i) {
    Rng rng(derive_seed(spec.seed, {stream::kSynth, i}));
    d.graphs.push_back(synth_graph(spec, i % 2 == 0, rng));
  }
  return d;
}

Dataset balanced_subsample(const Dataset& d, std::size_t n, std::uint64_t seed) {
  if (d.num_classes == 0 || n == 0 || n % d.num_classes != 0)
    throw_usage("subsample size must be a positive multiple of the class count");
  const std::size_t per_class = n / d.num_classes;
  auto members = d.class_members();
  std::vector<std::size_t> picked;
  picked.reserve(n);
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < per_class)
      throw_data("class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                 " graphs, need " + std::to_string(per_class));
    Rng rng(derive_seed(seed, {stream::kSubsample, c}));
    rng.shuffle(members[c]);
    picked.insert(picked.end(), members[c].begin(), members[c].begin() + static_cast<std::ptrdiff_t>(per_class));
  }
  Rng order(derive_seed(seed, {stream::kSubsample, 0xffff}));
  order.shuffle(picked);
  return d.subset(picked);
}

std::vector<Fold> kfold_split(const std::vector<std::uint32_t>& labels, std::size_t num_classes,
                              std::size_t k, std::uint64_t seed) {
  if (k < 2) throw_usage("k must be at least 2");
  std::vector<std::vector<std::size_t>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) members.at(labels[i]).push_back(i);
  for (std::size_t c = 0; c < num_classes; ++c)
    if (!members[c].empty() && members[c].size() < k)
      throw_usage("class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                  " members, fewer than k=" + std::to_string(k));

  // Deal each shuffled class round-robin; the running offset keeps fold sizes
  // balanced when class sizes are not multiples of k.
  std::vector<std::size_t> fold_of(labels.size());
  std::size_t offset = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    Rng rng(derive_seed(seed, {stream::kFold, c}));
    rng.shuffle(members[c]);
    for (std::size_t j = 0; j < members[c].size(); ++j) fold_of[members[c][j]] = (offset + j) % k;
    offset = (offset + members[c].size()) % k;
  }
  std::vector<Fold> folds(k);
  for (std::size_t i = 0; i < labels.size(); ++i)
    for (std::size_t f = 0; f < k; ++f) (f == fold_of[i] ? folds[f].test : folds[f].train).push_back(i);
  return folds;
}

std::vector<Fold> kfold_split(const Dataset& d, std::size_t k, std::uint64_t seed) {
  return kfold_split(d.labels(), d.num_classes, k, seed);
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_holdout(
    const std::vector<std::size_t>& ids, const std::vector<std::uint32_t>& labels, double fraction,
    std::uint64_t seed) {
  std::uint32_t max_label = 0;
  for (std::size_t id : ids) max_label = std::max(max_label, labels.at(id));
  std::vector<std::vector<std::size_t>> members(max_label + 1);
  for (std::size_t id : ids) members[labels[id]].push_back(id);

  std::vector<std::size_t> kept, held;
  for (std::size_t c = 0; c < members.size(); ++c) {
    auto& m = members[c];
    Rng rng(derive_seed(seed, {stream::kValidation, c}));
    rng.shuffle(m);
    std::size_t n_held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(m.size())));
    if (m.size() >= 2) n_held = std::clamp<std::size_t>(n_held, 1, m.size() - 1);
    else n_held = 0;
    held.insert(held.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(n_held));
    kept.insert(kept.end(), m.begin() + static_cast<std::ptrdiff_t>(n_held), m.end());
  }
  std::sort(kept.begin(), kept.end());
  std::sort(held.begin(), held.end());
  return {kept, held};
}

}  // namespace gam
