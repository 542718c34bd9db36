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

#include "gam/nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gam::nn {

namespace {

ParamRef make_ref(const std::string& name, Mat& value, Mat& grad) {
  return ParamRef{name, std::span<double>(value.data(), static_cast<std::size_t>(value.size())),
                  std::span<double>(grad.data(), static_cast<std::size_t>(grad.size())), value.rows(),
                  value.cols()};
}

ParamRef make_ref(const std::string& name, Vec& value, Vec& grad) {
  return ParamRef{name, std::span<double>(value.data(), static_cast<std::size_t>(value.size())),
                  std::span<double>(grad.data(), static_cast<std::size_t>(grad.size())), value.rows(), 1};
}

void require(bool ok, const char* what) {
  if (!ok) throw_usage(std::string("dimension mismatch: ") + what);
}

}  // namespace

void zero_grads(std::span<const ParamRef> params) {
  for (const auto& p : params) std::fill(p.grad.begin(), p.grad.end(), 0.0);
}

std::size_t param_count(std::span<const ParamRef> params) {
  std::size_t n = 0;
  for (const auto& p : params) n += p.size();
  return n;
}

std::vector<double> flatten_values(std::span<const ParamRef> params) {
  std::vector<double> out;
  out.reserve(param_count(params));
  for (const auto& p : params) out.insert(out.end(), p.value.begin(), p.value.end());
  return out;
}

std::vector<double> flatten_grads(std::span<const ParamRef> params) {
  std::vector<double> out;
  out.reserve(param_count(params));
  for (const auto& p : params) out.insert(out.end(), p.grad.begin(), p.grad.end());
  return out;
}

void assign_values(std::span<const ParamRef> params, std::span<const double> flat) {
  if (flat.size() != param_count(params)) throw_usage("parameter vector has the wrong length");
  std::size_t off = 0;
  for (const auto& p : params) {
    std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(off), p.size(), p.value.begin());
    off += p.size();
  }
}

double grad_norm(std::span<const ParamRef> params) {
  double s = 0.0;
  for (const auto& p : params)
    for (double g : p.grad) s += g * g;
  return std::sqrt(s);
}

void scale_grads(std::span<const ParamRef> params, double factor) {
  for (const auto& p : params)
    for (double& g : p.grad) g *= factor;
}

// ---------------------------------------------------------------------------

Linear::Linear(Eigen::Index in, Eigen::Index out)
    : weight(Mat::Zero(out, in)), weight_grad(Mat::Zero(out, in)), bias(Vec::Zero(out)), bias_grad(Vec::Zero(out)) {}

void Linear::init(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(in(), 1)));
  for (Eigen::Index j = 0; j < weight.cols(); ++j)
    for (Eigen::Index i = 0; i < weight.rows(); ++i) weight(i, j) = (2.0 * rng.uniform() - 1.0) * bound;
  for (Eigen::Index i = 0; i < bias.size(); ++i) bias(i) = (2.0 * rng.uniform() - 1.0) * bound;
}

Mat Linear::forward(const Mat& x) const {
  require(x.rows() == in(), "linear input");
  Mat y = weight * x;
  y.colwise() += bias;
  return y;
}

Mat Linear::backward(const Mat& x, const Mat& upstream) {
  require(x.rows() == in() && upstream.rows() == out() && x.cols() == upstream.cols(), "linear backward");
  weight_grad.noalias() += upstream * x.transpose();
  bias_grad += upstream.rowwise().sum();
  return weight.transpose() * upstream;
}

void Linear::zero_grad() {
  weight_grad.setZero();
  bias_grad.setZero();
}

void Linear::collect(const std::string& name, std::vector<ParamRef>& out) {
  out.push_back(make_ref(name + ".weight", weight, weight_grad));
  out.push_back(make_ref(name + ".bias", bias, bias_grad));
}

// ---------------------------------------------------------------------------

LstmCell::LstmCell(Eigen::Index input_size, Eigen::Index hidden_size)
    : weight(Mat::Zero(4 * hidden_size, input_size + hidden_size)),
      weight_grad(Mat::Zero(4 * hidden_size, input_size + hidden_size)),
      bias(Vec::Zero(4 * hidden_size)),
      bias_grad(Vec::Zero(4 * hidden_size)),
      input_size_(input_size),
      hidden_size_(hidden_size) {}

void LstmCell::init(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<Eigen::Index>(weight.cols(), 1)));
  for (Eigen::Index j = 0; j < weight.cols(); ++j)
    for (Eigen::Index i = 0; i < weight.rows(); ++i) weight(i, j) = (2.0 * rng.uniform() - 1.0) * bound;
  bias.setZero();
  bias.segment(hidden_size_, hidden_size_).setOnes();
}

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

void LstmCell::forward(const Mat& x, const Mat& h_prev, const Mat& c_prev, LstmCache& cache) const {
  const Eigen::Index H = hidden_size_;
  require(x.rows() == input_size_ && h_prev.rows() == H && c_prev.rows() == H, "lstm input");
  require(x.cols() == h_prev.cols() && x.cols() == c_prev.cols(), "lstm batch");
  const Eigen::Index M = x.cols();

  cache.input_hidden.resize(input_size_ + H, M);
  cache.input_hidden.topRows(input_size_) = x;
  cache.input_hidden.bottomRows(H) = h_prev;
  Mat z = weight * cache.input_hidden;
  z.colwise() += bias;

  cache.in_gate = z.topRows(H).unaryExpr(&sigmoid);
  cache.forget_gate = z.middleRows(H, H).unaryExpr(&sigmoid);
  cache.out_gate = z.middleRows(2 * H, H).unaryExpr(&sigmoid);
  cache.candidate = z.bottomRows(H).array().tanh();
  cache.c_prev = c_prev;
  cache.c = cache.forget_gate.cwiseProduct(c_prev) + cache.in_gate.cwiseProduct(cache.candidate);
  cache.tanh_c = cache.c.array().tanh();
  cache.h = cache.out_gate.cwiseProduct(cache.tanh_c);
}

void LstmCell::backward(const LstmCache& cache, const Mat& dh, const Mat& dc, Mat& dx, Mat& dh_prev,
                        Mat& dc_prev) {
  const Eigen::Index H = hidden_size_;
  const Eigen::Index M = cache.h.cols();
  require(dh.rows() == H && dh.cols() == M && dc.rows() == H && dc.cols() == M, "lstm backward");

  const auto one = Mat::Ones(H, M).array();
  Mat dc_total = dc.array() + dh.array() * cache.out_gate.array() * (one - cache.tanh_c.array().square());

  Mat dz(4 * H, M);
  dz.topRows(H) = (dc_total.array() * cache.candidate.array() * cache.in_gate.array() *
                   (one - cache.in_gate.array()))
                      .matrix();
  dz.middleRows(H, H) = (dc_total.array() * cache.c_prev.array() * cache.forget_gate.array() *
                         (one - cache.forget_gate.array()))
                            .matrix();
  dz.middleRows(2 * H, H) =
      (dh.array() * cache.tanh_c.array() * cache.out_gate.array() * (one - cache.out_gate.array())).matrix();
  dz.bottomRows(H) =
      (dc_total.array() * cache.in_gate.array() * (one - cache.candidate.array().square())).matrix();

  weight_grad.noalias() += dz * cache.input_hidden.transpose();
  bias_grad += dz.rowwise().sum();
  Mat dxh = weight.transpose() * dz;
  dx = dxh.topRows(input_size_);
  dh_prev = dxh.bottomRows(H);
  dc_prev = dc_total.cwiseProduct(cache.forget_gate);
}

void LstmCell::zero_grad() {
  weight_grad.setZero();
  bias_grad.setZero();
}

void LstmCell::collect(const std::string& name, std::vector<ParamRef>& out) {
  out.push_back(make_ref(name + ".weight", weight, weight_grad));
  out.push_back(make_ref(name + ".bias", bias, bias_grad));
}

// ---------------------------------------------------------------------------

Mat relu(const Mat& z) { return z.cwiseMax(0.0); }

Mat relu_backward(const Mat& pre, const Mat& upstream) {
  return (pre.array() > 0.0).select(upstream, 0.0);
}

Mat softmax(const Mat& z) {
  if (!z.allFinite()) throw_usage("softmax input is not finite");
  Mat p(z.rows(), z.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const double mx = z.col(j).maxCoeff();
    p.col(j) = (z.col(j).array() - mx).exp();
    p.col(j) /= p.col(j).sum();
  }
  return p;
}

Vec softmax(const Vec& z) { return softmax(Mat(z)).col(0); }

Mat softmax_backward(const Mat& probs, const Mat& dprobs) {
  Mat dz(probs.rows(), probs.cols());
  for (Eigen::Index j = 0; j < probs.cols(); ++j) {
    const double dot = probs.col(j).dot(dprobs.col(j));
    dz.col(j) = probs.col(j).cwiseProduct(dprobs.col(j).array().matrix() - Vec::Constant(probs.rows(), dot));
  }
  return dz;
}

LossGrad cross_entropy(const Vec& logits, std::size_t label) {
  if (label >= static_cast<std::size_t>(logits.size()))
    throw_usage("label " + std::to_string(label) + " out of range for " + std::to_string(logits.size()) + " classes");
  if (!logits.allFinite()) throw_usage("cross_entropy input is not finite");
  const double mx = logits.maxCoeff();
  const double lse = mx + std::log((logits.array() - mx).exp().sum());
  LossGrad out;
  out.loss = lse - logits(static_cast<Eigen::Index>(label));
  out.grad = (logits.array() - lse).exp();
  out.grad(static_cast<Eigen::Index>(label)) -= 1.0;
  return out;
}

ScalarLossGrad mse(double pred, double target) {
  const double diff = pred - target;
  return {diff * diff, 2.0 * diff};
}

// ---------------------------------------------------------------------------

Adam::Adam(std::vector<ParamRef> params, double beta1, double beta2, double eps)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const auto& p : params_) {
    m_.push_back(Vec::Zero(static_cast<Eigen::Index>(p.size())));
    v_.push_back(Vec::Zero(static_cast<Eigen::Index>(p.size())));
  }
}

AdamOutcome Adam::step(double lr) {
  for (const auto& p : params_)
    for (double g : p.grad)
      if (!std::isfinite(g)) return AdamOutcome::SkippedNonFinite;

  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const auto& p = params_[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = p.grad[i];
      double& m = m_[k](static_cast<Eigen::Index>(i));
      double& v = v_[k](static_cast<Eigen::Index>(i));
      m = beta1_ * m + (1.0 - beta1_) * g;
      v = beta2_ * v + (1.0 - beta2_) * g * g;
      p.value[i] -= lr * (m / c1) / (std::sqrt(v / c2) + eps_);
    }
  }
  return AdamOutcome::Applied;
}

// ---------------------------------------------------------------------------

GradCheckResult grad_check(const std::function<double()>& loss, std::span<const ParamRef> params,
                           std::uint64_t probe_seed, const GradCheckOptions& options) {
  GradCheckResult result;
  Rng rng(probe_seed);
  for (const auto& p : params) {
    std::vector<std::size_t> coords(p.size());
    std::iota(coords.begin(), coords.end(), 0);
    if (options.samples_per_block != 0 && options.samples_per_block < coords.size()) {
      rng.shuffle(coords);
      coords.resize(options.samples_per_block);
    }
    for (std::size_t i : coords) {
      const double original = p.value[i];
      p.value[i] = original + options.step;
      const double up = loss();
      p.value[i] = original - options.step;
      const double down = loss();
      p.value[i] = original;

      const double numeric = (up - down) / (2.0 * options.step);
      const double analytic = p.grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), options.abs_floor});
      const double rel = std::abs(analytic - numeric) / denom;
      ++result.coordinates_checked;
      if (rel > result.max_rel_error || !std::isfinite(rel)) {
        result.max_rel_error = std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity();
        result.worst_param = p.name;
        result.worst_index = i;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace gam::nn
