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

#ifndef GAM_MODEL_HPP
#define GAM_MODEL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gam/graph.hpp"
#include "gam/nn.hpp"

namespace gam {

using nn::Mat;
using nn::Vec;

struct ModelDims {
  std::size_t num_types = 0;    // R
  std::size_t attr_dim = 0;     // D
  std::size_t num_classes = 0;  // L
  std::size_t rank_embed = 64;  // output of the rank input layer
  std::size_t attr_embed = 64;  // output of the attribute input layer
  std::size_t step_size = 164;  // S
  std::size_t hidden = 200;     // H

  bool operator==(const ModelDims&) const = default;
};

/// Parameters of the walking agent.
///
///   step network:   a = relu(W1 r_{t-1} + b1), d = relu(W2 x_t + b2),
///                   s_t = relu(W3 [a; d] + b3)
///   core:           (h_t, c_t) = LSTM(s_t, h_{t-1}, c_{t-1})
///   heads:          r_t = softmax(Wr h_t + br), logits = Wc h + bc,
///                   b_t = Wb h_t + bb
class GamModel {
 public:
  GamModel() = default;
  GamModel(const ModelDims& dims, std::uint64_t init_seed);

  const ModelDims& dims() const { return dims_; }

  /// Every parameter block in a fixed order: theta_s1, theta_s2, theta_s3,
  /// theta_h, theta_r, theta_c, theta_b (weight then bias for each).
  std::vector<nn::ParamRef> params();
  void zero_grad();

  nn::Linear rank_embed;     // theta_s1: R -> A
  nn::Linear attr_embed;     // theta_s2: D -> B
  nn::Linear step_combine;   // theta_s3: A + B -> S
  nn::LstmCell core;         // theta_h
  nn::Linear rank_head;      // theta_r: H -> R
  nn::Linear class_head;     // theta_c: H -> L
  nn::Linear baseline_head;  // theta_b: H -> 1

 private:
  ModelDims dims_;
};

/// Strictly positive probability vector over node types.
using RankVector = Vec;

struct HistoryState {
  Vec h;
  Vec c;
};

// --- single-agent building blocks -----------------------------------------

struct EpisodeStart {
  NodeId node = 0;
  RankVector rank;
  HistoryState state;
};

EpisodeStart init_episode(const GamModel& model, const GraphAccess& g, Rng& rng);

struct StepChoice {
  NodeId node = 0;
  double log_prob = 0.0;
  std::size_t neighbor_index = 0;
  NeighborView view;
};

/// Moves from `current` to a neighbor with probability proportional to the
/// rank of the neighbor's type. Reads the graph through neighbor_view only.
StepChoice step_sample(const RankVector& rank_prev, const GraphAccess& g, NodeId current, Rng& rng);

/// Exact step distribution over the neighbors listed in `view`.
Vec step_probabilities(const RankVector& rank_prev, const NeighborView& view);

Vec step_embed(const GamModel& model, const Vec& attrs, const RankVector& rank_prev);
HistoryState core_update(const GamModel& model, const Vec& step, const HistoryState& prev);
RankVector rank_forward(const GamModel& model, const Vec& h);

struct Classification {
  Vec logits;
  Vec probs;
};
Classification classify(const GamModel& model, const Vec& h);
double baseline_forward(const GamModel& model, const Vec& h);

// --- batched episodes -------------------------------------------------------

/// Everything computed at step t for a batch of agents (columns).
struct StepRecord {
  Mat rank_prev;      // r_{t-1}, R x M
  Mat attrs;          // d_{c_t}, D x M
  Mat type_counts;    // neighbor type histogram of c_{t-1}, R x M
  std::vector<TypeId> chosen_type;
  Mat rank_embed_pre, attr_embed_pre, step_pre, step;
  nn::LstmCache lstm;
  Mat rank_logits;    // z_t, R x M
  Mat rank;           // r_t = softmax(z_t)
  Mat baseline;       // b_t, 1 x M
};

/// A batch of M independent agents walked for T steps on one graph.
struct EpisodeBatch {
  std::size_t steps = 0;
  std::size_t agents = 0;
  std::vector<std::vector<NodeId>> nodes;  // [agent][0..T]
  std::vector<StepRecord> records;         // records[t - 1] for t = 1..T
  Mat step_log_probs;                      // T x M, row t - 1 is log P(c_t)
  Mat final_logits;                        // L x M from h_T
  Mat final_probs;
  std::vector<std::uint32_t> predicted;    // argmax of final_probs
  std::vector<double> rewards;             // +1 / -1 once a label is assigned

  const Mat& hidden(std::size_t t) const { return records.at(t - 1).lstm.h; }
};

/// Walk taken by each agent, with what the agent observed at every step.
/// Enough to recompute the forward pass without touching the graph.
struct FrozenWalk {
  std::vector<std::vector<NodeId>> nodes;  // [agent][0..T]
  std::vector<Mat> attrs;                  // per step, D x M
  std::vector<Mat> type_counts;            // per step, R x M
  std::vector<std::vector<TypeId>> chosen_type;

  std::size_t steps() const { return attrs.size(); }
  std::size_t agents() const { return nodes.size(); }
};

/// Runs one agent per RNG in lockstep; agent i draws only from rngs[i].
EpisodeBatch run_episodes(const GamModel& model, const GraphAccess& g, std::size_t steps,
                          std::span<Rng> rngs);

/// Recomputes the forward pass for a fixed set of walks.
EpisodeBatch replay_episodes(const GamModel& model, const FrozenWalk& walk);
FrozenWalk freeze(const EpisodeBatch& batch);

/// Sets rewards to +1 where the agent's argmax matches `label`, -1 elsewhere.
void assign_rewards(EpisodeBatch& batch, std::uint32_t label);

/// Gradient of log P(c_{t+1} | c_t, r_t) with respect to the rank logits z_t,
/// for every agent (R x M). Valid for t = 1..T-1.
Mat step_log_prob_grad(const EpisodeBatch& batch, std::size_t t);

/// Upstream gradients fed into the episode backward pass.
struct EpisodeUpstream {
  Mat final_logits;              // L x M, may be empty
  std::vector<Mat> rank_logits;  // entry t - 1 is dL/dz_t; entries may be empty
  std::vector<Mat> hidden;       // entry t - 1 is an extra dL/dh_t; entries may be empty
};

/// Backpropagates through the class head, rank head, LSTM and step network
/// across all steps and accumulates into the model's gradients. The baseline
/// head is not touched.
void backward_episodes(GamModel& model, const EpisodeBatch& batch, const EpisodeUpstream& upstream);

/// Per-agent view of a batch.
struct EpisodeTrace {
  std::vector<NodeId> nodes;               // c_0..c_T
  std::vector<TypeId> node_types;          // types of c_1..c_T
  std::vector<RankVector> ranks;           // r_0..r_{T-1}
  std::vector<double> step_log_probs;      // t = 1..T
  std::vector<HistoryState> histories;     // t = 1..T
  std::vector<double> baselines;           // t = 1..T
  Vec final_logits;
  double reward = 0.0;
};

EpisodeTrace extract_trace(const EpisodeBatch& batch, std::size_t agent);

/// Trace export, one row per step t = 1..T: epoch, t, node_id (c_t),
/// node_type, rank_0..rank_{R-1} (the r_{t-1} that chose c_t), b_t,
/// predicted_label. `type_names` may be empty, in which case type indices
/// are written.
std::string trace_csv_header(std::size_t num_types);
std::string trace_csv_rows(std::size_t epoch, const EpisodeTrace& trace, const std::vector<std::string>& type_names);

EpisodeTrace rollout(const GamModel& model, const GraphAccess& g, std::uint32_t label, std::size_t steps,
                     Rng& rng);

struct Prediction {
  std::uint32_t label = 0;
  Vec probs;
};

/// Index of the largest entry; ties go to the lower index.
std::uint32_t argmax_lowest(const Vec& v);

/// Mean of per-agent class probabilities (columns) and its argmax.
Prediction average_predictions(const Mat& agent_probs);

/// Averages the softmax outputs of independent agents (one per RNG).
Prediction predict(const GamModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs);
Prediction predict(const GamModel& model, const GraphAccess& g, std::size_t agents, std::size_t steps,
                   Rng& rng);

/// Agent streams derived from (seed, graph index, agent index).
std::vector<Rng> agent_rngs(std::uint64_t seed, std::uint64_t graph_index, std::size_t agents);

}  // namespace gam

#endif  // GAM_MODEL_HPP
