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

#include "gam/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gam {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

std::string le_bytes(std::uint64_t v) {
  std::string s(8, '\0');
  for (int i = 0; i < 8; ++i) s[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  return s;
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

Vec agg_attr(const AttributedGraph& g) { return g.attrs().colwise().mean().transpose(); }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t WlDictionary::relabel(const Signature& sig) {
  auto it = table_.find(sig);
  if (it != table_.end()) return it->second;
  std::string bytes = le_bytes(sig.first);
  for (std::uint64_t l : sig.second) bytes += le_bytes(l);
  const std::uint64_t label = fnv1a64(bytes);
  table_.emplace(sig, label);
  return label;
}

WlColoring wl_refine(const AttributedGraph& g, std::size_t iterations, WlDictionary* dict) {
  WlDictionary local;
  WlDictionary& table = dict ? *dict : local;
  WlColoring out;
  out.labels.emplace_back(g.types().begin(), g.types().end());
  for (std::size_t it = 0; it < iterations; ++it) {
    const auto& prev = out.labels.back();
    std::vector<std::uint64_t> next(g.node_count());
    for (NodeId v = 0; v < g.node_count(); ++v) {
      WlDictionary::Signature sig{prev[v], {}};
      for (NodeId w : g.neighbors(v)) sig.second.push_back(prev[w]);
      std::sort(sig.second.begin(), sig.second.end());
      next[v] = table.relabel(sig);
    }
    out.labels.push_back(std::move(next));
  }
  return out;
}

Vec agg_wl(const AttributedGraph& g, const WlColoring& coloring, std::size_t dim) {
  Vec f = Vec::Zero(idx(dim));
  const auto& labels = coloring.final_labels();
  for (std::uint64_t l : labels) f(idx(fnv1a64(le_bytes(l)) % dim)) += 1.0;
  return f / static_cast<double>(g.node_count());
}

std::string to_string(BaselineMethod m) { return m == BaselineMethod::AggAttr ? "agg-attr" : "agg-wl"; }

Vec Featurizer::operator()(const AttributedGraph& g) const {
  if (method == BaselineMethod::AggAttr) return agg_attr(g);
  return agg_wl(g, wl_refine(g, wl_iterations), wl_dim);
}

Mat featurize(const Featurizer& f, const Dataset& d, const std::vector<std::size_t>& ids) {
  Mat x(idx(f.dim(d.attr_dim)), idx(ids.size()));
  for (std::size_t j = 0; j < ids.size(); ++j) x.col(idx(j)) = f(d.graphs.at(ids[j]));
  return x;
}

std::string features_csv(const Featurizer& f, const Dataset& d, const std::vector<std::size_t>& ids) {
  const std::size_t dim = f.dim(d.attr_dim);
  std::ostringstream os;
  os.precision(17);
  os << "graph_id,label";
  for (std::size_t j = 0; j < dim; ++j) os << ",f_" << j;
  os << '\n';
  for (std::size_t id : ids) {
    const Vec x = f(d.graphs.at(id));
    os << id << ',' << d.graphs[id].label();
    for (Eigen::Index j = 0; j < x.size(); ++j) os << ',' << x(j);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> penalty_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double v : kPenaltyGrid) grid.emplace_back(v, 0.0);
  for (double v : kPenaltyGrid) grid.emplace_back(0.0, v);
  return grid;
}

Vec LogisticRegression::probs(const Vec& x) const { return nn::softmax(Vec(layer.forward(x).col(0))); }

std::uint32_t LogisticRegression::predict(const Vec& x) const {
  const Vec p = probs(x);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < p.size(); ++i)
    if (p(i) > p(best)) best = i;
  return static_cast<std::uint32_t>(best);
}

LogisticRegression train_logreg(const Mat& x, const std::vector<std::uint32_t>& labels, std::size_t num_classes,
                                double l1, double l2, const LogRegOptions& options) {
  if (static_cast<std::size_t>(x.cols()) != labels.size() || labels.empty())
    throw_usage("feature/label count mismatch");
  std::vector<char> seen(num_classes, 0);
  for (auto l : labels) seen.at(l) = 1;
  if (std::count(seen.begin(), seen.end(), 1) < 2) throw_data("logistic regression needs at least two classes");

  LogisticRegression model;
  model.l1 = l1;
  model.l2 = l2;
  model.layer = nn::Linear(x.rows(), idx(num_classes));
  std::vector<nn::ParamRef> params;
  model.layer.collect("logreg", params);
  nn::Adam adam(params);

  const double inv_n = 1.0 / static_cast<double>(labels.size());
  for (std::size_t it = 0; it < options.iterations; ++it) {
    model.layer.zero_grad();
    const Mat logits = model.layer.forward(x);
    const Mat p = nn::softmax(logits);
    Mat d = p;
    for (std::size_t j = 0; j < labels.size(); ++j) d(idx(labels[j]), idx(j)) -= 1.0;
    d *= inv_n;
    model.layer.backward(x, d);
    model.layer.weight_grad += l1 * model.layer.weight.unaryExpr(&sign) + 2.0 * l2 * model.layer.weight;
    const double frac = options.iterations > 1 ? static_cast<double>(it) / static_cast<double>(options.iterations - 1) : 0.0;
    adam.step(options.lr_initial * std::pow(options.lr_final / options.lr_initial, frac));
  }
  return model;
}

BaselineModel fit_baseline(BaselineMethod method, const Dataset& d, const std::vector<std::size_t>& ids,
                           double validation_fraction, std::uint64_t seed) {
  const auto all_labels = d.labels();
  auto [fit_ids, val_ids] = stratified_holdout(ids, all_labels, validation_fraction, derive_seed(seed, {stream::kValidation}));
  if (fit_ids.empty() || val_ids.empty()) throw_data("not enough graphs to carve a validation split");
  auto labels_of = [&](const std::vector<std::size_t>& v) {
    std::vector<std::uint32_t> out;
    for (std::size_t id : v) out.push_back(all_labels[id]);
    return out;
  };
  const auto fit_labels = labels_of(fit_ids);
  const auto val_labels = labels_of(val_ids);

  const std::vector<std::size_t> iteration_grid =
      method == BaselineMethod::AggWl ? kWlIterationGrid : std::vector<std::size_t>{0};
  BaselineModel best;
  bool have_best = false;
  for (std::size_t iters : iteration_grid) {
    Featurizer f{method, iters, kWlFeatureDim};
    const Mat x_fit = featurize(f, d, fit_ids);
    const Mat x_val = featurize(f, d, val_ids);
    for (const auto& [l1, l2] : penalty_grid()) {
      const LogisticRegression clf = train_logreg(x_fit, fit_labels, d.num_classes, l1, l2);
      std::size_t correct = 0;
      for (std::size_t j = 0; j < val_ids.size(); ++j)
        if (clf.predict(x_val.col(idx(j))) == val_labels[j]) ++correct;
      const double acc = static_cast<double>(correct) / static_cast<double>(val_ids.size());
      if (!have_best || acc > best.validation_accuracy) {
        best.featurizer = f;
        best.classifier = clf;
        best.validation_accuracy = acc;
        have_best = true;
      }
    }
  }
  best.classifier = train_logreg(featurize(best.featurizer, d, ids), labels_of(ids), d.num_classes, best.classifier.l1,
                                 best.classifier.l2);
  return best;
}

// ---------------------------------------------------------------------------

std::vector<std::vector<NodeId>> partial_views(const AttributedGraph& g, std::size_t n_views, std::size_t walk_len,
                                               std::uint64_t seed) {
  std::vector<std::vector<NodeId>> views;
  views.reserve(n_views);
  for (std::size_t v = 0; v < n_views; ++v) {
    Rng rng(derive_seed(seed, {stream::kView, v}));
    NodeId cur = static_cast<NodeId>(rng.uniform_index(g.node_count()));
    std::vector<NodeId> nodes{cur};
    for (std::size_t s = 0; s < walk_len; ++s) {
      const auto& nbrs = g.neighbors(cur);
      cur = nbrs[rng.uniform_index(nbrs.size())];
      nodes.push_back(cur);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    views.push_back(std::move(nodes));
  }
  return views;
}

std::uint32_t predict_partial(const LogisticRegression& classifier, const Featurizer& featurizer,
                              const AttributedGraph& g, std::size_t n_views, std::size_t walk_len,
                              std::uint64_t seed) {
  std::vector<std::size_t> votes(static_cast<std::size_t>(classifier.layer.out()), 0);
  for (const auto& view : partial_views(g, n_views, walk_len, seed))
    ++votes[classifier.predict(featurizer(g.induced_subgraph(view)))];
  return static_cast<std::uint32_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

double baseline_accuracy(const BaselineModel& model, const Dataset& d, const std::vector<std::size_t>& ids) {
  if (ids.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t id : ids)
    if (model.classifier.predict(model.featurizer(d.graphs.at(id))) == d.graphs[id].label()) ++correct;
  return static_cast<double>(correct) / static_cast<double>(ids.size());
}

double baseline_partial_accuracy(const BaselineModel& model, const Dataset& d, const std::vector<std::size_t>& ids,
                                 std::size_t n_views, std::size_t walk_len, std::uint64_t seed) {
  if (ids.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t id : ids) {
    const std::uint32_t p = predict_partial(model.classifier, model.featurizer, d.graphs.at(id), n_views, walk_len,
                                            derive_seed(seed, {stream::kGraph, id}));
    if (p == d.graphs[id].label()) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ids.size());
}

}  // namespace gam
