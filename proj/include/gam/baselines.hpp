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

#ifndef GAM_BASELINES_HPP
#define GAM_BASELINES_HPP

// Whole-graph aggregation baselines with a logistic-regression head, and the
// random-walk partial-view protocol that restricts them to what a walking
// agent could see.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gam/graph.hpp"
#include "gam/nn.hpp"

namespace gam {

using nn::Mat;
using nn::Vec;

/// Mean of the attribute rows.
Vec agg_attr(const AttributedGraph& g);

/// 64-bit FNV-1a over a byte string (offset basis 0xcbf29ce484222325,
/// prime 0x100000001b3).
std::uint64_t fnv1a64(std::string_view bytes);

/// Signature -> label table shared by every graph refined with it.
/// Labels are FNV-1a hashes of the signature, so the table only records what
/// was seen and never changes the labels themselves.
class WlDictionary {
 public:
  using Signature = std::pair<std::uint64_t, std::vector<std::uint64_t>>;

  std::uint64_t relabel(const Signature& sig);
  std::size_t size() const { return table_.size(); }

 private:
  std::map<Signature, std::uint64_t> table_;
};

struct WlColoring {
  /// labels[i][v]: label of node v after i rounds; labels[0] are node types.
  std::vector<std::vector<std::uint64_t>> labels;

  std::size_t iterations() const { return labels.empty() ? 0 : labels.size() - 1; }
  const std::vector<std::uint64_t>& final_labels() const { return labels.back(); }
};

/// k rounds of relabel(v) = hash(label(v), sorted multiset of neighbor labels).
WlColoring wl_refine(const AttributedGraph& g, std::size_t iterations, WlDictionary* dict = nullptr);

inline constexpr std::size_t kWlFeatureDim = 200;

/// Node average of one-hot buckets, bucket = fnv1a64(8 little-endian bytes of
/// the final label) mod dim.
Vec agg_wl(const AttributedGraph& g, const WlColoring& coloring, std::size_t dim = kWlFeatureDim);

enum class BaselineMethod { AggAttr, AggWl };

std::string to_string(BaselineMethod m);

struct Featurizer {
  BaselineMethod method = BaselineMethod::AggAttr;
  std::size_t wl_iterations = 2;
  std::size_t wl_dim = kWlFeatureDim;

  Vec operator()(const AttributedGraph& g) const;
  std::size_t dim(std::size_t attr_dim) const { return method == BaselineMethod::AggAttr ? attr_dim : wl_dim; }
};

/// Columns are graphs.
Mat featurize(const Featurizer& f, const Dataset& d, const std::vector<std::size_t>& ids);

/// Columns: graph_id, label, f_0..f_{dim-1}.
std::string features_csv(const Featurizer& f, const Dataset& d, const std::vector<std::size_t>& ids);

/// Single softmax layer.
struct LogisticRegression {
  nn::Linear layer;
  double l1 = 0.0;
  double l2 = 0.0;

  Vec probs(const Vec& x) const;
  std::uint32_t predict(const Vec& x) const;
};

struct LogRegOptions {
  std::size_t iterations = 500;
  double lr_initial = 0.05;
  double lr_final = 1e-4;
};

/// Full-batch Adam on mean cross-entropy + l1 |W|_1 + l2 |W|_2^2 (bias not
/// penalized). Features are columns of `x`.
LogisticRegression train_logreg(const Mat& x, const std::vector<std::uint32_t>& labels, std::size_t num_classes,
                                 double l1, double l2, const LogRegOptions& options = {});

struct BaselineModel {
  Featurizer featurizer;
  LogisticRegression classifier;
  double validation_accuracy = 0.0;
};

inline const std::vector<double> kPenaltyGrid = {0.01, 0.1, 1.0};
inline const std::vector<std::size_t> kWlIterationGrid = {2, 3, 4};

/// Candidate (l1, l2) pairs: one penalty kind at a time, each strength from
/// kPenaltyGrid.
std::vector<std::pair<double, double>> penalty_grid();

/// Grid search over penalty_grid() and, for Agg-WL, the WL iteration count,
/// scored on a stratified holdout of `ids`; the winner is refit on all of
/// `ids`.
BaselineModel fit_baseline(BaselineMethod method, const Dataset& d, const std::vector<std::size_t>& ids,
                           double validation_fraction, std::uint64_t seed);

/// Node sets visited by unbiased random walks of `walk_len` steps from
/// uniform starts. Each set is sorted and deduplicated.
std::vector<std::vector<NodeId>> partial_views(const AttributedGraph& g, std::size_t n_views, std::size_t walk_len,
                                               std::uint64_t seed);

/// Majority vote over views (ties go to the lower class index).
std::uint32_t predict_partial(const LogisticRegression& classifier, const Featurizer& featurizer,
                              const AttributedGraph& g, std::size_t n_views, std::size_t walk_len,
                              std::uint64_t seed);

double baseline_accuracy(const BaselineModel& model, const Dataset& d, const std::vector<std::size_t>& ids);
double baseline_partial_accuracy(const BaselineModel& model, const Dataset& d, const std::vector<std::size_t>& ids,
                                 std::size_t n_views, std::size_t walk_len, std::uint64_t seed);

}  // namespace gam

#endif  // GAM_BASELINES_HPP
