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

#ifndef GAM_NN_HPP
#define GAM_NN_HPP

// Dense building blocks with hand-written gradients. Every operation works on
// a batch: inputs are matrices whose columns are independent samples, so a
// plain vector is the one-column case.

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gam/common.hpp"

namespace gam::nn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Non-owning handle on one parameter block and its gradient accumulator.
/// Values are stored column-major (Eigen's default).
struct ParamRef {
  std::string name;
  std::span<double> value;
  std::span<double> grad;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;

  std::size_t size() const { return value.size(); }
};

void zero_grads(std::span<const ParamRef> params);
std::size_t param_count(std::span<const ParamRef> params);
std::vector<double> flatten_values(std::span<const ParamRef> params);
std::vector<double> flatten_grads(std::span<const ParamRef> params);
void assign_values(std::span<const ParamRef> params, std::span<const double> flat);
/// L2 norm over every gradient entry.
double grad_norm(std::span<const ParamRef> params);
void scale_grads(std::span<const ParamRef> params, double factor);

/// Affine map y = W x + b.
class Linear {
 public:
  Linear() = default;
  Linear(Eigen::Index in, Eigen::Index out);

  /// Uniform in +-1/sqrt(fan_in) for weights and bias.
  void init(Rng& rng);

  Mat forward(const Mat& x) const;
  /// Accumulates dW += upstream x^T and db += row sums of upstream; returns
  /// W^T upstream.
  Mat backward(const Mat& x, const Mat& upstream);

  Eigen::Index in() const { return weight.cols(); }
  Eigen::Index out() const { return weight.rows(); }
  void zero_grad();
  void collect(const std::string& name, std::vector<ParamRef>& out);

  Mat weight, weight_grad;
  Vec bias, bias_grad;
};

/// Activations of one LSTM step, kept for the backward pass.
struct LstmCache {
  Mat input_hidden;  // [x; h_prev]
  Mat in_gate, forget_gate, out_gate, candidate;
  Mat c_prev, c, tanh_c, h;
};

/// Forget-gate LSTM without peepholes. Gate rows in the fused weight matrix
/// are ordered input, forget, output, candidate; columns are [x; h_prev].
class LstmCell {
 public:
  LstmCell() = default;
  LstmCell(Eigen::Index input_size, Eigen::Index hidden_size);

  /// Uniform +-1/sqrt(fan_in) weights, zero biases, forget bias 1.
  void init(Rng& rng);

  void forward(const Mat& x, const Mat& h_prev, const Mat& c_prev, LstmCache& cache) const;

  /// Given dL/dh_t and dL/dc_t (the latter from step t+1), accumulates
  /// parameter gradients and writes dL/dx, dL/dh_{t-1}, dL/dc_{t-1}.
  void backward(const LstmCache& cache, const Mat& dh, const Mat& dc, Mat& dx, Mat& dh_prev,
                Mat& dc_prev);

  Eigen::Index input_size() const { return input_size_; }
  Eigen::Index hidden_size() const { return hidden_size_; }
  void zero_grad();
  void collect(const std::string& name, std::vector<ParamRef>& out);

  Mat weight, weight_grad;
  Vec bias, bias_grad;

 private:
  Eigen::Index input_size_ = 0;
  Eigen::Index hidden_size_ = 0;
};

Mat relu(const Mat& z);
/// Upstream gradient masked by the sign of the pre-activation.
Mat relu_backward(const Mat& pre, const Mat& upstream);

/// Column-wise softmax with max subtraction. Throws Error(Usage) on
/// non-finite input.
Mat softmax(const Mat& z);
Vec softmax(const Vec& z);
/// Pulls dL/dp back through p = softmax(z), column-wise.
Mat softmax_backward(const Mat& probs, const Mat& dprobs);

struct LossGrad {
  double loss = 0.0;
  Vec grad;
};

/// -log softmax(logits)[label] and its logit gradient softmax - onehot.
LossGrad cross_entropy(const Vec& logits, std::size_t label);

struct ScalarLossGrad {
  double loss = 0.0;
  double grad = 0.0;
};

/// Squared error (pred - target)^2 and d/dpred.
ScalarLossGrad mse(double pred, double target);

enum class AdamOutcome { Applied, SkippedNonFinite };

/// Adam with bias correction. Moments are keyed by position in the parameter
/// list given at construction; the list must not change afterwards.
class Adam {
 public:
  Adam() = default;
  Adam(std::vector<ParamRef> params, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

  /// One update using the gradients currently stored in the parameter refs.
  /// A non-finite gradient leaves parameters and moments untouched.
  AdamOutcome step(double lr);

  std::uint64_t steps() const { return t_; }
  const std::vector<Vec>& first_moments() const { return m_; }
  const std::vector<Vec>& second_moments() const { return v_; }

 private:
  std::vector<ParamRef> params_;
  std::vector<Vec> m_, v_;
  double beta1_ = 0.9, beta2_ = 0.999, eps_ = 1e-8;
  std::uint64_t t_ = 0;
};

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
};

struct GradCheckOptions {
  double step = 1e-5;
  /// Coordinates probed per block; 0 probes all of them.
  std::size_t samples_per_block = 0;
  /// Relative error is |a - n| / max(|a|, |n|, abs_floor).
  double abs_floor = 1e-6;
};

/// Compares the analytic gradients already stored in `params` against central
/// differences of `loss`. Parameter values are restored afterwards.
GradCheckResult grad_check(const std::function<double()>& loss, std::span<const ParamRef> params,
                           std::uint64_t probe_seed, const GradCheckOptions& options = {});

}  // namespace gam::nn

#endif  // GAM_NN_HPP
