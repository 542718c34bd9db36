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

#include "gam/model.hpp"

#include <cmath>
#include <sstream>

namespace gam {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

}  // namespace

GamModel::GamModel(const ModelDims& dims, std::uint64_t init_seed) : dims_(dims) {
  if (dims.num_types == 0 || dims.attr_dim == 0 || dims.num_classes == 0 || dims.rank_embed == 0 ||
      dims.attr_embed == 0 || dims.step_size == 0 || dims.hidden == 0)
    throw_usage("model dimensions must all be positive");
  rank_embed = nn::Linear(idx(dims.num_types), idx(dims.rank_embed));
  attr_embed = nn::Linear(idx(dims.attr_dim), idx(dims.attr_embed));
  step_combine = nn::Linear(idx(dims.rank_embed + dims.attr_embed), idx(dims.step_size));
  core = nn::LstmCell(idx(dims.step_size), idx(dims.hidden));
  rank_head = nn::Linear(idx(dims.hidden), idx(dims.num_types));
  class_head = nn::Linear(idx(dims.hidden), idx(dims.num_classes));
  baseline_head = nn::Linear(idx(dims.hidden), 1);

  Rng rng(derive_seed(init_seed, {stream::kInit}));
  rank_embed.init(rng);
  attr_embed.init(rng);
  step_combine.init(rng);
  core.init(rng);
  rank_head.init(rng);
  class_head.init(rng);
  baseline_head.init(rng);
}

std::vector<nn::ParamRef> GamModel::params() {
  std::vector<nn::ParamRef> out;
  rank_embed.collect("theta_s1", out);
  attr_embed.collect("theta_s2", out);
  step_combine.collect("theta_s3", out);
  core.collect("theta_h", out);
  rank_head.collect("theta_r", out);
  class_head.collect("theta_c", out);
  baseline_head.collect("theta_b", out);
  return out;
}

void GamModel::zero_grad() {
  rank_embed.zero_grad();
  attr_embed.zero_grad();
  step_combine.zero_grad();
  core.zero_grad();
  rank_head.zero_grad();
  class_head.zero_grad();
  baseline_head.zero_grad();
}

// ---------------------------------------------------------------------------

namespace {

Mat uniform_rank(std::size_t types, std::size_t agents) {
  return Mat::Constant(idx(types), idx(agents), 1.0 / static_cast<double>(types));
}

Mat join_embeddings(const StepRecord& rec) {
  Mat joint(rec.rank_embed_pre.rows() + rec.attr_embed_pre.rows(), rec.rank_embed_pre.cols());
  joint.topRows(rec.rank_embed_pre.rows()) = nn::relu(rec.rank_embed_pre);
  joint.bottomRows(rec.attr_embed_pre.rows()) = nn::relu(rec.attr_embed_pre);
  return joint;
}

// Network part of step t; rank_prev and attrs must already be filled in.
void forward_step(const GamModel& model, StepRecord& rec, const Mat& h_prev, const Mat& c_prev) {
  rec.rank_embed_pre = model.rank_embed.forward(rec.rank_prev);
  rec.attr_embed_pre = model.attr_embed.forward(rec.attrs);
  rec.step_pre = model.step_combine.forward(join_embeddings(rec));
  rec.step = nn::relu(rec.step_pre);
  model.core.forward(rec.step, h_prev, c_prev, rec.lstm);
  rec.rank_logits = model.rank_head.forward(rec.lstm.h);
  rec.rank = nn::softmax(rec.rank_logits);
  rec.baseline = model.baseline_head.forward(rec.lstm.h);
}

void finish_batch(const GamModel& model, EpisodeBatch& batch) {
  const Mat& h_last = batch.records.back().lstm.h;
  batch.final_logits = model.class_head.forward(h_last);
  batch.final_probs = nn::softmax(batch.final_logits);
  batch.predicted.resize(batch.agents);
  for (std::size_t i = 0; i < batch.agents; ++i)
    batch.predicted[i] = argmax_lowest(batch.final_probs.col(idx(i)));
}

double log_step_prob(const Mat& rank_prev, const Mat& counts, std::size_t agent, TypeId chosen) {
  const Eigen::Index j = idx(agent);
  const double mass = counts.col(j).dot(rank_prev.col(j));
  return std::log(rank_prev(idx(chosen), j)) - std::log(mass);
}

}  // namespace

EpisodeBatch run_episodes(const GamModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs) {
  if (steps == 0) throw_usage("episode length must be at least 1");
  if (rngs.empty()) throw_usage("need at least one agent");
  const ModelDims& dims = model.dims();
  const std::size_t M = rngs.size();
  const std::size_t n = g.node_count();

  EpisodeBatch batch;
  batch.steps = steps;
  batch.agents = M;
  batch.nodes.assign(M, {});
  batch.records.resize(steps);
  batch.step_log_probs = Mat::Zero(idx(steps), idx(M));
  for (std::size_t i = 0; i < M; ++i) {
    batch.nodes[i].reserve(steps + 1);
    batch.nodes[i].push_back(static_cast<NodeId>(rngs[i].uniform_index(n)));
  }

  Mat h = Mat::Zero(idx(dims.hidden), idx(M));
  Mat c = Mat::Zero(idx(dims.hidden), idx(M));
  Mat rank_prev = uniform_rank(dims.num_types, M);
  std::vector<double> weights;

  for (std::size_t t = 1; t <= steps; ++t) {
    StepRecord& rec = batch.records[t - 1];
    rec.rank_prev = rank_prev;
    rec.attrs.resize(idx(dims.attr_dim), idx(M));
    rec.type_counts = Mat::Zero(idx(dims.num_types), idx(M));
    rec.chosen_type.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
      const NeighborView view = g.neighbor_view(batch.nodes[i].back());
      weights.resize(view.size());
      for (std::size_t k = 0; k < view.size(); ++k) {
        weights[k] = rank_prev(idx(view.neighbor_types[k]), idx(i));
        rec.type_counts(idx(view.neighbor_types[k]), idx(i)) += 1.0;
      }
      const std::size_t k = rngs[i].categorical(weights);
      batch.nodes[i].push_back(view.neighbor_ids[k]);
      rec.chosen_type[i] = view.neighbor_types[k];
      rec.attrs.col(idx(i)) = view.neighbor_attrs.row(idx(k)).transpose();
      batch.step_log_probs(idx(t - 1), idx(i)) = log_step_prob(rank_prev, rec.type_counts, i, rec.chosen_type[i]);
    }
    forward_step(model, rec, h, c);
    h = rec.lstm.h;
    c = rec.lstm.c;
    rank_prev = rec.rank;
  }
  finish_batch(model, batch);
  return batch;
}

EpisodeBatch replay_episodes(const GamModel& model, const FrozenWalk& walk) {
  const ModelDims& dims = model.dims();
  const std::size_t steps = walk.steps();
  const std::size_t M = walk.agents();
  if (steps == 0 || M == 0) throw_usage("empty walk");

  EpisodeBatch batch;
  batch.steps = steps;
  batch.agents = M;
  batch.nodes = walk.nodes;
  batch.records.resize(steps);
  batch.step_log_probs = Mat::Zero(idx(steps), idx(M));

  Mat h = Mat::Zero(idx(dims.hidden), idx(M));
  Mat c = Mat::Zero(idx(dims.hidden), idx(M));
  Mat rank_prev = uniform_rank(dims.num_types, M);
  for (std::size_t t = 1; t <= steps; ++t) {
    StepRecord& rec = batch.records[t - 1];
    rec.rank_prev = rank_prev;
    rec.attrs = walk.attrs[t - 1];
    rec.type_counts = walk.type_counts[t - 1];
    rec.chosen_type = walk.chosen_type[t - 1];
    for (std::size_t i = 0; i < M; ++i)
      batch.step_log_probs(idx(t - 1), idx(i)) = log_step_prob(rank_prev, rec.type_counts, i, rec.chosen_type[i]);
    forward_step(model, rec, h, c);
    h = rec.lstm.h;
    c = rec.lstm.c;
    rank_prev = rec.rank;
  }
  finish_batch(model, batch);
  return batch;
}

FrozenWalk freeze(const EpisodeBatch& batch) {
  FrozenWalk walk;
  walk.nodes = batch.nodes;
  for (const auto& rec : batch.records) {
    walk.attrs.push_back(rec.attrs);
    walk.type_counts.push_back(rec.type_counts);
    walk.chosen_type.push_back(rec.chosen_type);
  }
  return walk;
}

void assign_rewards(EpisodeBatch& batch, std::uint32_t label) {
  batch.rewards.resize(batch.agents);
  for (std::size_t i = 0; i < batch.agents; ++i) batch.rewards[i] = batch.predicted[i] == label ? 1.0 : -1.0;
}

Mat step_log_prob_grad(const EpisodeBatch& batch, std::size_t t) {
  if (t < 1 || t >= batch.steps) throw_usage("step log-prob gradient is defined for t = 1..T-1");
  const Mat& rank = batch.records[t - 1].rank;
  const StepRecord& next = batch.records[t];
  Mat grad(rank.rows(), rank.cols());
  for (Eigen::Index i = 0; i < rank.cols(); ++i) {
    Vec weighted = next.type_counts.col(i).cwiseProduct(rank.col(i));
    grad.col(i) = -weighted / weighted.sum();
    grad(idx(next.chosen_type[static_cast<std::size_t>(i)]), i) += 1.0;
  }
  return grad;
}

void backward_episodes(GamModel& model, const EpisodeBatch& batch, const EpisodeUpstream& upstream) {
  const ModelDims& dims = model.dims();
  const std::size_t T = batch.steps;
  const std::size_t M = batch.agents;
  const Eigen::Index A = idx(dims.rank_embed);
  const Eigen::Index B = idx(dims.attr_embed);

  Mat dh_next = Mat::Zero(idx(dims.hidden), idx(M));
  Mat dc_next = Mat::Zero(idx(dims.hidden), idx(M));
  Mat dr_next;  // dL/dr_t arriving from the step network at t + 1
  if (upstream.final_logits.size() != 0)
    dh_next += model.class_head.backward(batch.records.back().lstm.h, upstream.final_logits);

  Mat ds, dh_prev, dc_prev;
  for (std::size_t t = T; t >= 1; --t) {
    const StepRecord& rec = batch.records[t - 1];
    const Mat& h = rec.lstm.h;

    Mat dz;
    if (dr_next.size() != 0) dz = nn::softmax_backward(rec.rank, dr_next);
    if (t - 1 < upstream.rank_logits.size() && upstream.rank_logits[t - 1].size() != 0)
      dz = dz.size() == 0 ? upstream.rank_logits[t - 1] : Mat(dz + upstream.rank_logits[t - 1]);

    Mat dh = dh_next;
    if (t - 1 < upstream.hidden.size() && upstream.hidden[t - 1].size() != 0) dh += upstream.hidden[t - 1];
    if (dz.size() != 0) dh += model.rank_head.backward(h, dz);

    model.core.backward(rec.lstm, dh, dc_next, ds, dh_prev, dc_prev);
    const Mat dstep_pre = nn::relu_backward(rec.step_pre, ds);
    const Mat djoint = model.step_combine.backward(join_embeddings(rec), dstep_pre);
    const Mat da = nn::relu_backward(rec.rank_embed_pre, djoint.topRows(A));
    const Mat dd = nn::relu_backward(rec.attr_embed_pre, djoint.bottomRows(B));
    dr_next = model.rank_embed.backward(rec.rank_prev, da);
    model.attr_embed.backward(rec.attrs, dd);

    dh_next = dh_prev;
    dc_next = dc_prev;
  }
}

EpisodeTrace extract_trace(const EpisodeBatch& batch, std::size_t agent) {
  const Eigen::Index j = idx(agent);
  EpisodeTrace tr;
  tr.nodes = batch.nodes.at(agent);
  for (std::size_t t = 1; t <= batch.steps; ++t) {
    const StepRecord& rec = batch.records[t - 1];
    tr.ranks.push_back(rec.rank_prev.col(j));
    tr.node_types.push_back(rec.chosen_type[agent]);
    tr.step_log_probs.push_back(batch.step_log_probs(idx(t - 1), j));
    tr.histories.push_back({rec.lstm.h.col(j), rec.lstm.c.col(j)});
    tr.baselines.push_back(rec.baseline(0, j));
  }
  tr.final_logits = batch.final_logits.col(j);
  if (agent < batch.rewards.size()) tr.reward = batch.rewards[agent];
  return tr;
}

std::string trace_csv_header(std::size_t num_types) {
  std::string h = "epoch,t,node_id,node_type";
  for (std::size_t k = 0; k < num_types; ++k) h += ",rank_" + std::to_string(k);
  return h + ",b_t,predicted_label\n";
}

std::string trace_csv_rows(std::size_t epoch, const EpisodeTrace& trace, const std::vector<std::string>& type_names) {
  std::ostringstream os;
  os.precision(17);
  const std::uint32_t predicted = argmax_lowest(trace.final_logits);
  for (std::size_t t = 1; t <= trace.baselines.size(); ++t) {
    const TypeId type = trace.node_types[t - 1];
    os << epoch << ',' << t << ',' << trace.nodes[t] << ',';
    if (type_names.empty())
      os << type;
    else
      os << type_names.at(type);
    for (Eigen::Index k = 0; k < trace.ranks[t - 1].size(); ++k) os << ',' << trace.ranks[t - 1](k);
    os << ',' << trace.baselines[t - 1] << ',' << predicted << '\n';
  }
  return os.str();
}

// --- single-agent API -------------------------------------------------------

EpisodeStart init_episode(const GamModel& model, const GraphAccess& g, Rng& rng) {
  const ModelDims& dims = model.dims();
  EpisodeStart s;
  s.node = static_cast<NodeId>(rng.uniform_index(g.node_count()));
  s.rank = Vec::Constant(idx(dims.num_types), 1.0 / static_cast<double>(dims.num_types));
  s.state = {Vec::Zero(idx(dims.hidden)), Vec::Zero(idx(dims.hidden))};
  return s;
}

Vec step_probabilities(const RankVector& rank_prev, const NeighborView& view) {
  Vec p(idx(view.size()));
  for (std::size_t k = 0; k < view.size(); ++k) p(idx(k)) = rank_prev(idx(view.neighbor_types[k]));
  const double mass = p.sum();
  if (!(mass > 0.0)) throw_runtime("rank vector gives the neighborhood zero mass");
  return p / mass;
}

StepChoice step_sample(const RankVector& rank_prev, const GraphAccess& g, NodeId current, Rng& rng) {
  StepChoice out;
  out.view = g.neighbor_view(current);
  const Vec p = step_probabilities(rank_prev, out.view);
  out.neighbor_index = rng.categorical(std::span<const double>(p.data(), static_cast<std::size_t>(p.size())));
  out.node = out.view.neighbor_ids[out.neighbor_index];
  out.log_prob = std::log(p(idx(out.neighbor_index)));
  return out;
}

Vec step_embed(const GamModel& model, const Vec& attrs, const RankVector& rank_prev) {
  StepRecord rec;
  rec.rank_embed_pre = model.rank_embed.forward(rank_prev);
  rec.attr_embed_pre = model.attr_embed.forward(attrs);
  return nn::relu(model.step_combine.forward(join_embeddings(rec))).col(0);
}

HistoryState core_update(const GamModel& model, const Vec& step, const HistoryState& prev) {
  nn::LstmCache cache;
  model.core.forward(step, prev.h, prev.c, cache);
  return {cache.h.col(0), cache.c.col(0)};
}

RankVector rank_forward(const GamModel& model, const Vec& h) {
  return nn::softmax(Vec(model.rank_head.forward(h).col(0)));
}

Classification classify(const GamModel& model, const Vec& h) {
  Classification out;
  out.logits = model.class_head.forward(h).col(0);
  out.probs = nn::softmax(out.logits);
  return out;
}

double baseline_forward(const GamModel& model, const Vec& h) { return model.baseline_head.forward(h)(0, 0); }

EpisodeTrace rollout(const GamModel& model, const GraphAccess& g, std::uint32_t label, std::size_t steps, Rng& rng) {
  EpisodeBatch batch = run_episodes(model, g, steps, std::span<Rng>(&rng, 1));
  assign_rewards(batch, label);
  return extract_trace(batch, 0);
}

std::uint32_t argmax_lowest(const Vec& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v(i) > v(best)) best = i;
  return static_cast<std::uint32_t>(best);
}

Prediction average_predictions(const Mat& agent_probs) {
  if (agent_probs.cols() == 0) throw_usage("need at least one agent");
  Prediction out;
  out.probs = agent_probs.rowwise().mean();
  out.label = argmax_lowest(out.probs);
  return out;
}

Prediction predict(const GamModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs) {
  return average_predictions(run_episodes(model, g, steps, rngs).final_probs);
}

Prediction predict(const GamModel& model, const GraphAccess& g, std::size_t agents, std::size_t steps, Rng& rng) {
  if (agents == 0) throw_usage("need at least one agent");
  std::vector<Rng> rngs;
  rngs.reserve(agents);
  for (std::size_t i = 0; i < agents; ++i) rngs.emplace_back(rng.next_u64());
  return predict(model, g, steps, rngs);
}

std::vector<Rng> agent_rngs(std::uint64_t seed, std::uint64_t graph_index, std::size_t agents) {
  std::vector<Rng> rngs;
  rngs.reserve(agents);
  for (std::size_t i = 0; i < agents; ++i)
    rngs.emplace_back(derive_seed(seed, {stream::kGraph, graph_index, stream::kAgent, i}));
  return rngs;
}

}  // namespace gam
