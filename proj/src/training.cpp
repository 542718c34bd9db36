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

#include "gam/training.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace gam {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (steps < 1) throw_usage("T must be at least 1");
  if (samples < 1) throw_usage("M must be at least 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw_usage("gamma must lie in (0, 1]");
  if (!(lr_initial >= 0.0 && lr_final >= 0.0 && lr_final <= lr_initial))
    throw_usage("learning rates must satisfy 0 <= lr_final <= lr_initial");
  if (lr_initial > 0.0 && lr_final <= 0.0) throw_usage("a positive initial learning rate needs a positive final one");
  if (epochs < 1) throw_usage("epochs must be at least 1");
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
    throw_usage("validation fraction must lie in (0, 1)");
  if (clip_norm < 0.0) throw_usage("clip norm must be non-negative");
  if (mem_agents < 1) throw_usage("memory agents must be at least 1");
}

double TrainConfig::learning_rate(std::size_t epoch) const {
  if (lr_initial <= 0.0) return 0.0;
  if (epochs <= 1) return lr_initial;
  const double frac = static_cast<double>(epoch) / static_cast<double>(epochs - 1);
  return lr_initial * std::pow(lr_final / lr_initial, frac);
}

std::string TrainReport::to_csv() const {
  std::ostringstream os;
  os << "epoch,ce_loss,pg_surrogate,baseline_mse,val_acc,lr\n";
  for (const auto& e : epochs)
    os << e.epoch << ',' << fmt(e.ce_loss) << ',' << fmt(e.pg_surrogate) << ',' << fmt(e.baseline_mse) << ','
       << fmt(e.val_acc) << ',' << fmt(e.lr) << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

double advantage(const EpisodeBatch& batch, std::size_t agent, std::size_t t, double gamma, bool use_baseline) {
  const double discounted = std::pow(gamma, static_cast<double>(batch.steps - t)) * batch.rewards.at(agent);
  return use_baseline ? discounted - batch.records.at(t - 1).baseline(0, idx(agent)) : discounted;
}

std::vector<Mat> reinforce_upstream(const EpisodeBatch& batch, double gamma, bool use_baseline, double* surrogate) {
  if (batch.agents == 0 || batch.steps == 0) throw_usage("empty episode batch");
  if (batch.rewards.size() != batch.agents) throw_usage("rewards have not been assigned");
  const double inv_m = 1.0 / static_cast<double>(batch.agents);
  std::vector<Mat> up(batch.steps);
  double value = 0.0;
  for (std::size_t t = 1; t < batch.steps; ++t) {
    Mat g = step_log_prob_grad(batch, t);
    for (std::size_t i = 0; i < batch.agents; ++i) {
      const double a = advantage(batch, i, t, gamma, use_baseline);
      value += inv_m * batch.step_log_probs(idx(t), idx(i)) * a;
      g.col(idx(i)) *= -inv_m * a;
    }
    up[t - 1] = std::move(g);
  }
  if (surrogate) *surrogate = value;
  return up;
}

double reinforce_gradient(GamModel& model, const EpisodeBatch& batch, double gamma, bool use_baseline) {
  double surrogate = 0.0;
  EpisodeUpstream up;
  up.rank_logits = reinforce_upstream(batch, gamma, use_baseline, &surrogate);
  backward_episodes(model, batch, up);
  return surrogate;
}

double baseline_gradient(GamModel& model, const EpisodeBatch& batch, double gamma, double scale) {
  if (batch.rewards.size() != batch.agents) throw_usage("rewards have not been assigned");
  scale /= static_cast<double>(batch.agents * batch.steps);
  double loss = 0.0;
  for (std::size_t t = 1; t <= batch.steps; ++t) {
    const StepRecord& rec = batch.records[t - 1];
    Mat d(1, idx(batch.agents));
    for (std::size_t i = 0; i < batch.agents; ++i) {
      const double target = std::pow(gamma, static_cast<double>(batch.steps - t)) * batch.rewards[i];
      const auto e = nn::mse(rec.baseline(0, idx(i)), target);
      loss += scale * e.loss;
      d(0, idx(i)) = scale * e.grad;
    }
    model.baseline_head.backward(rec.lstm.h, d);  // input gradient dropped: stop-gradient into h
  }
  return loss;
}

namespace {

Mat cross_entropy_upstream(const EpisodeBatch& batch, std::uint32_t label, double& loss) {
  const double inv_m = 1.0 / static_cast<double>(batch.agents);
  Mat d(batch.final_logits.rows(), batch.final_logits.cols());
  loss = 0.0;
  for (std::size_t i = 0; i < batch.agents; ++i) {
    const auto ce = nn::cross_entropy(batch.final_logits.col(idx(i)), label);
    loss += inv_m * ce.loss;
    d.col(idx(i)) = inv_m * ce.grad;
  }
  return d;
}

}  // namespace

EpisodeLosses supervised_gradients(GamModel& model, const EpisodeBatch& batch, std::uint32_t label, double gamma) {
  EpisodeLosses out;
  EpisodeUpstream up;
  up.final_logits = cross_entropy_upstream(batch, label, out.ce);
  backward_episodes(model, batch, up);
  out.baseline_mse = baseline_gradient(model, batch, gamma);
  return out;
}

EpisodeLosses hybrid_gradients(GamModel& model, const EpisodeBatch& batch, std::uint32_t label, double gamma,
                               bool use_baseline) {
  EpisodeLosses out;
  EpisodeUpstream up;
  up.final_logits = cross_entropy_upstream(batch, label, out.ce);
  up.rank_logits = reinforce_upstream(batch, gamma, use_baseline, &out.pg_surrogate);
  backward_episodes(model, batch, up);
  out.baseline_mse = baseline_gradient(model, batch, gamma);
  return out;
}

// ---------------------------------------------------------------------------

EvalResult evaluate(const GamModel& model, const Dataset& d, const std::vector<std::size_t>& ids,
                    std::size_t agents, std::size_t steps, std::uint64_t seed) {
  EvalResult r;
  r.class_total.assign(d.num_classes, 0);
  r.class_correct.assign(d.num_classes, 0);
  for (std::size_t id : ids) {
    auto rngs = agent_rngs(seed, id, agents);
    const Prediction p = predict(model, d.graphs.at(id), steps, rngs);
    const std::uint32_t truth = d.graphs[id].label();
    r.predictions.push_back(p.label);
    ++r.total;
    ++r.class_total.at(truth);
    if (p.label == truth) {
      ++r.correct;
      ++r.class_correct[truth];
    }
  }
  r.accuracy = r.total == 0 ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(r.total);
  return r;
}

ModelDims dims_for(const Dataset& d, const ModelDims& sizes) {
  ModelDims dims = sizes;
  dims.num_types = d.vocab.size();
  dims.attr_dim = d.attr_dim;
  dims.num_classes = d.num_classes;
  return dims;
}

namespace detail {

TrainReport run_training_loop(const Dataset& d, const std::vector<std::size_t>& ids, const TrainConfig& config,
                              const LoopCallbacks& cb) {
  config.validate();
  if (d.num_classes < 2) throw_data("training needs at least two classes");
  const auto labels = d.labels();
  auto [train_ids, val_ids] =
      stratified_holdout(ids, labels, config.validation_fraction, derive_seed(config.seed, {stream::kValidation}));
  if (train_ids.empty() || val_ids.empty()) throw_data("not enough graphs to carve a validation split");

  TrainReport report;
  report.train_ids = train_ids;
  report.validation_ids = val_ids;
  report.best_val_acc = cb.validate(val_ids);
  report.best_epoch = 0;
  cb.keep_best();
  if (cb.on_epoch) cb.on_epoch(0);

  std::size_t since_best = 0;
  for (std::size_t e = 0; e < config.epochs; ++e) {
    const double lr = config.learning_rate(e);
    const std::uint64_t epoch_seed = derive_seed(config.seed, {stream::kEpoch, e});
    std::vector<std::size_t> order = train_ids;
    Rng shuffler(derive_seed(epoch_seed, {0}));
    shuffler.shuffle(order);

    EpochStats stats;
    stats.epoch = e + 1;
    stats.lr = lr;
    for (std::size_t id : order) {
      const EpisodeLosses l = cb.update(id, epoch_seed, lr);
      stats.ce_loss += l.ce;
      stats.pg_surrogate += l.pg_surrogate;
      stats.baseline_mse += l.baseline_mse;
    }
    const double n = static_cast<double>(order.size());
    stats.ce_loss /= n;
    stats.pg_surrogate /= n;
    stats.baseline_mse /= n;
    stats.val_acc = cb.validate(val_ids);
    report.epochs.push_back(stats);
    if (cb.on_epoch) cb.on_epoch(stats.epoch);

    if (stats.val_acc > report.best_val_acc) {
      report.best_val_acc = stats.val_acc;
      report.best_epoch = stats.epoch;
      cb.keep_best();
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  return report;
}

}  // namespace detail

TrainResult train(const Dataset& d, const std::vector<std::size_t>& ids, const TrainConfig& config,
                  const EpochHook& hook) {
  GamModel model(dims_for(d, config.dims), derive_seed(config.seed, {stream::kInit}));
  auto params = model.params();
  nn::Adam adam(params);
  GamModel best = model;
  const std::uint64_t eval_seed = derive_seed(config.seed, {stream::kEval});

  detail::LoopCallbacks cb;
  cb.update = [&](std::size_t id, std::uint64_t epoch_seed, double lr) {
    const AttributedGraph& g = d.graphs[id];
    auto rngs = agent_rngs(epoch_seed, id, config.samples);
    EpisodeBatch batch = run_episodes(model, g, config.steps, rngs);
    assign_rewards(batch, g.label());
    model.zero_grad();
    const EpisodeLosses losses = hybrid_gradients(model, batch, g.label(), config.gamma, config.use_baseline);
    if (config.clip_norm > 0.0) {
      const double norm = nn::grad_norm(params);
      if (norm > config.clip_norm) nn::scale_grads(params, config.clip_norm / norm);
    }
    adam.step(lr);
    return losses;
  };
  cb.validate = [&](const std::vector<std::size_t>& val_ids) {
    return evaluate(model, d, val_ids, config.samples, config.steps, eval_seed).accuracy;
  };
  cb.keep_best = [&] { best = model; };
  if (hook) cb.on_epoch = [&](std::size_t epoch) { hook(epoch, model); };

  TrainResult result;
  result.report = detail::run_training_loop(d, ids, config, cb);
  result.model = std::move(best);
  return result;
}

TrainResult train(const Dataset& d, const TrainConfig& config, const EpochHook& hook) {
  std::vector<std::size_t> ids(d.size());
  std::iota(ids.begin(), ids.end(), 0);
  return train(d, ids, config, hook);
}

}  // namespace gam
