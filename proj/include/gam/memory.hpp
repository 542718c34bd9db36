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

#ifndef GAM_MEMORY_HPP
#define GAM_MEMORY_HPP

// Multi-agent variant with a shared memory. Each agent pools its own history
// vectors with learned usefulness weights into a local memory; the local
// memories are averaged into the shared memory read by the class head.

#include <string>
#include <vector>

#include "gam/training.hpp"

namespace gam {

class MemModel {
 public:
  MemModel() = default;
  MemModel(const ModelDims& dims, std::uint64_t init_seed);

  std::vector<nn::ParamRef> params();  // base blocks, then theta_u
  void zero_grad();

  GamModel base;
  nn::Linear usefulness;  // theta_u: H -> 1
};

/// Softmax over time of the usefulness scores of h_1..h_T (columns).
Vec usefulness_weights(const MemModel& model, const Mat& histories);
/// Convex combination sum_j u_j h_j.
Vec pool_local(const Mat& histories, const Vec& weights);
/// Arithmetic mean of the local memories (columns), summed in column order.
Vec pool_shared(const Mat& locals);

struct MemoryPool {
  Mat usefulness;  // T x n, column i is agent i's weights
  Mat local;       // H x n
  Vec shared;      // H
  std::size_t n_agents = 0;

  /// Columns: agent, t, u_weight (t is 1-based).
  std::string to_csv() const;
};

/// One joint episode: n agents walking in lockstep plus the pooled read-out.
struct JointEpisode {
  EpisodeBatch batch;
  MemoryPool pool;
  Vec logits;
  Vec probs;
  std::uint32_t predicted = 0;
};

JointEpisode run_joint_episode(const MemModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs);
/// Pools and classifies an existing batch (used with frozen walks).
JointEpisode pool_and_classify(const MemModel& model, EpisodeBatch batch);

struct MemPrediction {
  std::uint32_t label = 0;
  Vec probs;
  MemoryPool pool;
};

MemPrediction mem_predict(const MemModel& model, const GraphAccess& g, std::size_t n_agents, std::size_t steps,
                          Rng& rng);
MemPrediction mem_predict(const MemModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs);

/// Sets every agent's reward to +1 if the joint prediction is right, else -1.
void assign_joint_reward(JointEpisode& ep, std::uint32_t label);

/// Cross-entropy of the joint prediction backpropagated through the shared
/// and local pooling, the usefulness head, and every agent's history; plus
/// per-agent REINFORCE with the shared reward and per-agent baseline MSE.
/// `scale` multiplies every loss term (and gradient) of this episode.
EpisodeLosses mem_hybrid_gradients(MemModel& model, const JointEpisode& ep, std::uint32_t label, double gamma,
                                   bool use_baseline, double scale = 1.0);

EvalResult evaluate_mem(const MemModel& model, const Dataset& d, const std::vector<std::size_t>& ids,
                        std::size_t n_agents, std::size_t steps, std::uint64_t seed);

using MemEpochHook = std::function<void(std::size_t epoch, const MemModel& model)>;

struct MemTrainResult {
  MemModel model;
  TrainReport report;
};

/// Per graph and update: max(1, M / mem_agents) joint episodes of
/// mem_agents agents each.
MemTrainResult train_mem(const Dataset& d, const std::vector<std::size_t>& ids, const TrainConfig& config,
                         const MemEpochHook& hook = {});
MemTrainResult train_mem(const Dataset& d, const TrainConfig& config, const MemEpochHook& hook = {});

}  // namespace gam

#endif  // GAM_MEMORY_HPP
