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

#ifndef GAM_TRAINING_HPP
#define GAM_TRAINING_HPP

#include <functional>
#include <string>
#include <vector>

#include "gam/model.hpp"

namespace gam {

struct TrainConfig {
  std::size_t steps = 12;        // T
  std::size_t samples = 20;      // M: episodes per graph per update, agents at prediction
  double gamma = 1.0;
  bool use_baseline = true;
  std::size_t epochs = 200;
  double lr_initial = 1e-3;
  double lr_final = 1e-6;
  std::size_t patience = 20;
  double validation_fraction = 0.1;
  double clip_norm = 0.0;        // max gradient norm; 0 disables clipping
  std::size_t mem_agents = 10;   // agents pooled per joint episode (memory variant)
  std::uint64_t seed = 0;
  ModelDims dims;                // R, D, L are taken from the dataset

  /// Throws Error(Usage) when an invariant is violated.
  void validate() const;
  /// Learning rate for a 0-based epoch: exponential decay from lr_initial to
  /// lr_final over the epoch budget.
  double learning_rate(std::size_t epoch) const;
};

struct EpochStats {
  std::size_t epoch = 0;  // 1-based
  double ce_loss = 0.0;
  double pg_surrogate = 0.0;
  double baseline_mse = 0.0;
  double val_acc = 0.0;
  double lr = 0.0;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  std::size_t best_epoch = 0;  // 0 means the initial parameters were never beaten
  double best_val_acc = 0.0;
  std::vector<std::size_t> train_ids;
  std::vector<std::size_t> validation_ids;

  /// Columns: epoch, ce_loss, pg_surrogate, baseline_mse, val_acc, lr.
  std::string to_csv() const;
};

/// Loss values of one update, averaged per episode.
struct EpisodeLosses {
  double ce = 0.0;
  double pg_surrogate = 0.0;  // (1/M) sum_i sum_{t<T} log pi * advantage
  double baseline_mse = 0.0;
};

/// Advantage of agent i at step t: gamma^{T-t} R_i, minus b_t when the
/// baseline is on. Treated as a constant by every gradient below.
double advantage(const EpisodeBatch& batch, std::size_t agent, std::size_t t, double gamma, bool use_baseline);

/// Upstream rank-logit gradients of the negated REINFORCE surrogate,
/// -(1/M) sum_i sum_{t=1}^{T-1} log pi(c_{t+1}) * advantage. Writes the
/// surrogate value to `surrogate` when non-null.
std::vector<Mat> reinforce_upstream(const EpisodeBatch& batch, double gamma, bool use_baseline,
                                    double* surrogate = nullptr);

/// Accumulates the REINFORCE gradient into theta_r, theta_h and theta_s.
/// Rewards must already be assigned.
double reinforce_gradient(GamModel& model, const EpisodeBatch& batch, double gamma, bool use_baseline);

/// Baseline MSE (1/M)(1/T) sum (gamma^{T-t} R - b_t)^2. Gradients go to
/// theta_b only: the histories are treated as constants. Loss and gradient
/// are multiplied by `scale`.
double baseline_gradient(GamModel& model, const EpisodeBatch& batch, double gamma, double scale = 1.0);

/// Cross-entropy of the final prediction averaged over agents, backpropagated
/// through h_T into the core and step network, plus the baseline MSE.
EpisodeLosses supervised_gradients(GamModel& model, const EpisodeBatch& batch, std::uint32_t label, double gamma);

/// Both of the above in a single backward pass.
EpisodeLosses hybrid_gradients(GamModel& model, const EpisodeBatch& batch, std::uint32_t label, double gamma,
                               bool use_baseline);

struct EvalResult {
  double accuracy = 0.0;
  std::size_t correct = 0;
  std::size_t total = 0;
  std::vector<std::size_t> class_total;
  std::vector<std::size_t> class_correct;
  std::vector<std::uint32_t> predictions;  // aligned with the evaluated ids
};

EvalResult evaluate(const GamModel& model, const Dataset& d, const std::vector<std::size_t>& ids,
                    std::size_t agents, std::size_t steps, std::uint64_t seed);

/// Called after every epoch (1-based) and once with epoch 0 before training.
using EpochHook = std::function<void(std::size_t epoch, const GamModel& model)>;

struct TrainResult {
  GamModel model;  // best-validation parameters
  TrainReport report;
};

TrainResult train(const Dataset& d, const std::vector<std::size_t>& ids, const TrainConfig& config,
                  const EpochHook& hook = {});
TrainResult train(const Dataset& d, const TrainConfig& config, const EpochHook& hook = {});

ModelDims dims_for(const Dataset& d, const ModelDims& sizes);

namespace detail {

/// Shared epoch loop for both agent variants.
struct LoopCallbacks {
  std::function<EpisodeLosses(std::size_t graph_id, std::uint64_t epoch_seed, double lr)> update;
  std::function<double(const std::vector<std::size_t>& ids)> validate;
  std::function<void()> keep_best;
  std::function<void(std::size_t epoch)> on_epoch;
};

TrainReport run_training_loop(const Dataset& d, const std::vector<std::size_t>& ids, const TrainConfig& config,
                              const LoopCallbacks& cb);

}  // namespace detail

}  // namespace gam

#endif  // GAM_TRAINING_HPP
