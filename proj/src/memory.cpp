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

#include "gam/memory.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace gam {

namespace {

Eigen::Index idx(std::size_t n) { return static_cast<Eigen::Index>(n); }

// H x T matrix of agent i's histories h_1..h_T.
Mat agent_histories(const EpisodeBatch& batch, std::size_t agent) {
  Mat hs(batch.records.front().lstm.h.rows(), idx(batch.steps));
  for (std::size_t t = 1; t <= batch.steps; ++t) hs.col(idx(t - 1)) = batch.hidden(t).col(idx(agent));
  return hs;
}

}  // namespace

MemModel::MemModel(const ModelDims& dims, std::uint64_t init_seed) : base(dims, init_seed) {
  usefulness = nn::Linear(idx(dims.hidden), 1);
  Rng rng(derive_seed(init_seed, {stream::kInit, 1}));
  usefulness.init(rng);
}

std::vector<nn::ParamRef> MemModel::params() {
  auto out = base.params();
  usefulness.collect("theta_u", out);
  return out;
}

void MemModel::zero_grad() {
  base.zero_grad();
  usefulness.zero_grad();
}

Vec usefulness_weights(const MemModel& model, const Mat& histories) {
  if (histories.cols() < 1) throw_usage("need at least one history vector");
  const Mat scores = model.usefulness.forward(histories);  // 1 x T
  return nn::softmax(Vec(scores.row(0).transpose()));
}

Vec pool_local(const Mat& histories, const Vec& weights) {
  if (histories.cols() != weights.size()) throw_usage("history count and weight count differ");
  Vec p = Vec::Zero(histories.rows());
  for (Eigen::Index j = 0; j < histories.cols(); ++j) p += weights(j) * histories.col(j);
  return p;
}

Vec pool_shared(const Mat& locals) {
  if (locals.cols() < 1) throw_usage("need at least one local memory");
  Vec m = Vec::Zero(locals.rows());
  for (Eigen::Index i = 0; i < locals.cols(); ++i) m += locals.col(i);
  return m / static_cast<double>(locals.cols());
}

std::string MemoryPool::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "agent,t,u_weight\n";
  for (Eigen::Index i = 0; i < usefulness.cols(); ++i)
    for (Eigen::Index t = 0; t < usefulness.rows(); ++t) os << i << ',' << (t + 1) << ',' << usefulness(t, i) << '\n';
  return os.str();
}

JointEpisode pool_and_classify(const MemModel& model, EpisodeBatch batch) {
  JointEpisode ep;
  const std::size_t n = batch.agents;
  ep.pool.n_agents = n;
  ep.pool.usefulness.resize(idx(batch.steps), idx(n));
  ep.pool.local.resize(batch.records.front().lstm.h.rows(), idx(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Mat hs = agent_histories(batch, i);
    const Vec u = usefulness_weights(model, hs);
    ep.pool.usefulness.col(idx(i)) = u;
    ep.pool.local.col(idx(i)) = pool_local(hs, u);
  }
  ep.pool.shared = pool_shared(ep.pool.local);
  ep.logits = model.base.class_head.forward(ep.pool.shared).col(0);
  ep.probs = nn::softmax(ep.logits);
  ep.predicted = argmax_lowest(ep.probs);
  ep.batch = std::move(batch);
  return ep;
}

JointEpisode run_joint_episode(const MemModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs) {
  return pool_and_classify(model, run_episodes(model.base, g, steps, rngs));
}

MemPrediction mem_predict(const MemModel& model, const GraphAccess& g, std::size_t steps, std::span<Rng> rngs) {
  JointEpisode ep = run_joint_episode(model, g, steps, rngs);
  return {ep.predicted, std::move(ep.probs), std::move(ep.pool)};
}

MemPrediction mem_predict(const MemModel& model, const GraphAccess& g, std::size_t n_agents, std::size_t steps,
                          Rng& rng) {
  if (n_agents == 0) throw_usage("need at least one agent");
  std::vector<Rng> rngs;
  rngs.reserve(n_agents);
  for (std::size_t i = 0; i < n_agents; ++i) rngs.emplace_back(rng.next_u64());
  return mem_predict(model, g, steps, rngs);
}

void assign_joint_reward(JointEpisode& ep, std::uint32_t label) {
  ep.batch.rewards.assign(ep.batch.agents, ep.predicted == label ? 1.0 : -1.0);
}

EpisodeLosses mem_hybrid_gradients(MemModel& model, const JointEpisode& ep, std::uint32_t label, double gamma,
                                   bool use_baseline, double scale) {
  const EpisodeBatch& batch = ep.batch;
  const std::size_t n = batch.agents;
  const std::size_t T = batch.steps;
  EpisodeLosses out;

  const auto ce = nn::cross_entropy(ep.logits, label);
  out.ce = scale * ce.loss;
  const Mat dm = model.base.class_head.backward(ep.pool.shared, scale * ce.grad);
  const Vec dp = dm.col(0) / static_cast<double>(n);

  EpisodeUpstream up;
  up.hidden.assign(T, Mat::Zero(batch.records.front().lstm.h.rows(), idx(n)));
  for (std::size_t i = 0; i < n; ++i) {
    const Mat hs = agent_histories(batch, i);
    const Vec u = ep.pool.usefulness.col(idx(i));
    Vec du(idx(T));
    for (std::size_t t = 0; t < T; ++t) {
      up.hidden[t].col(idx(i)) += u(idx(t)) * dp;
      du(idx(t)) = dp.dot(hs.col(idx(t)));
    }
    const Mat dscore = nn::softmax_backward(u, du).transpose();  // 1 x T
    const Mat dh = model.usefulness.backward(hs, dscore);        // H x T
    for (std::size_t t = 0; t < T; ++t) up.hidden[t].col(idx(i)) += dh.col(idx(t));
  }

  up.rank_logits = reinforce_upstream(batch, gamma, use_baseline, &out.pg_surrogate);
  out.pg_surrogate *= scale;
  for (auto& m : up.rank_logits)
    if (m.size() != 0) m *= scale;
  backward_episodes(model.base, batch, up);

  out.baseline_mse = baseline_gradient(model.base, batch, gamma, scale);
  return out;
}

EvalResult evaluate_mem(const MemModel& model, const Dataset& d, const std::vector<std::size_t>& ids,
                        std::size_t n_agents, std::size_t steps, std::uint64_t seed) {
  EvalResult r;
  r.class_total.assign(d.num_classes, 0);
  r.class_correct.assign(d.num_classes, 0);
  for (std::size_t id : ids) {
    auto rngs = agent_rngs(seed, id, n_agents);
    const MemPrediction p = mem_predict(model, d.graphs.at(id), steps, rngs);
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

MemTrainResult train_mem(const Dataset& d, const std::vector<std::size_t>& ids, const TrainConfig& config,
                         const MemEpochHook& hook) {
  MemModel model(dims_for(d, config.dims), derive_seed(config.seed, {stream::kInit}));
  auto params = model.params();
  nn::Adam adam(params);
  MemModel best = model;
  const std::uint64_t eval_seed = derive_seed(config.seed, {stream::kEval});
  const std::size_t episodes = std::max<std::size_t>(1, config.samples / config.mem_agents);
  const double scale = 1.0 / static_cast<double>(episodes);

  detail::LoopCallbacks cb;
  cb.update = [&](std::size_t id, std::uint64_t epoch_seed, double lr) {
    const AttributedGraph& g = d.graphs[id];
    model.zero_grad();
    EpisodeLosses total;
    for (std::size_t e = 0; e < episodes; ++e) {
      auto rngs = agent_rngs(derive_seed(epoch_seed, {e}), id, config.mem_agents);
      JointEpisode ep = run_joint_episode(model, g, config.steps, rngs);
      assign_joint_reward(ep, g.label());
      const EpisodeLosses l = mem_hybrid_gradients(model, ep, g.label(), config.gamma, config.use_baseline, scale);
      total.ce += l.ce;
      total.pg_surrogate += l.pg_surrogate;
      total.baseline_mse += l.baseline_mse;
    }
    if (config.clip_norm > 0.0) {
      const double norm = nn::grad_norm(params);
      if (norm > config.clip_norm) nn::scale_grads(params, config.clip_norm / norm);
    }
    adam.step(lr);
    return total;
  };
  cb.validate = [&](const std::vector<std::size_t>& val_ids) {
    return evaluate_mem(model, d, val_ids, config.mem_agents, config.steps, eval_seed).accuracy;
  };
  cb.keep_best = [&] { best = model; };
  if (hook) cb.on_epoch = [&](std::size_t epoch) { hook(epoch, model); };

  MemTrainResult result;
  result.report = detail::run_training_loop(d, ids, config, cb);
  result.model = std::move(best);
  return result;
}

MemTrainResult train_mem(const Dataset& d, const TrainConfig& config, const MemEpochHook& hook) {
  std::vector<std::size_t> ids(d.size());
  std::iota(ids.begin(), ids.end(), 0);
  return train_mem(d, ids, config, hook);
}

}  // namespace gam
