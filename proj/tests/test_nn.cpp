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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "gam/nn.hpp"

using namespace gam;
using namespace gam::nn;

namespace {

Mat random_mat(Eigen::Index r, Eigen::Index c, Rng& rng) {
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

}  // namespace

TEST_CASE("linear: identity map and bias gradient") {
  Linear l(2, 2);
  l.weight = Mat::Identity(2, 2);
  l.bias = Vec::Zero(2);
  Vec x(2);
  x << 3, 4;
  const Mat y = l.forward(x);
  CHECK(y(0, 0) == 3.0);
  CHECK(y(1, 0) == 4.0);
  l.zero_grad();
  Vec u(2);
  u << 0.5, -2.0;
  l.backward(x, u);
  CHECK(l.bias_grad(0) == 0.5);
  CHECK(l.bias_grad(1) == -2.0);
}

TEST_CASE("linear: finite differences on a random 3x2 layer") {
  Rng rng(1);
  Linear l(2, 3);
  l.init(rng);
  const Mat x = random_mat(2, 4, rng);
  const Mat w = random_mat(3, 4, rng);
  auto loss = [&] { return (l.forward(x).array() * w.array()).sum(); };
  std::vector<ParamRef> ps;
  l.collect("lin", ps);
  zero_grads(ps);
  const Mat dx = l.backward(x, w);
  const auto r = grad_check(loss, ps, 2);
  CHECK(r.max_rel_error < 1e-6);
  CHECK(r.coordinates_checked == 9);
  // input gradient against differences too
  Mat xp = x;
  const double h = 1e-6;
  xp(1, 2) += h;
  const double up = (l.forward(xp).array() * w.array()).sum();
  xp(1, 2) -= 2 * h;
  const double dn = (l.forward(xp).array() * w.array()).sum();
  CHECK(std::abs((up - dn) / (2 * h) - dx(1, 2)) < 1e-7);
}

TEST_CASE("lstm: all-zero parameters") {
  LstmCell cell(3, 2);
  cell.weight.setZero();
  cell.bias.setZero();
  LstmCache cache;
  const Mat x = Mat::Constant(3, 1, 0.7);
  cell.forward(x, Mat::Zero(2, 1), Mat::Zero(2, 1), cache);
  CHECK(cache.h.norm() == 0.0);
  CHECK(cache.c.norm() == 0.0);
  Mat c(2, 1);
  c << 1.5, -4.0;
  cell.forward(x, Mat::Zero(2, 1), c, cache);
  CHECK(cache.c(0, 0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(cache.c(1, 0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("lstm: init sets forget bias to one") {
  Rng rng(3);
  LstmCell cell(3, 4);
  cell.init(rng);
  CHECK(cell.bias.segment(4, 4).isApprox(Vec::Ones(4)));
  CHECK(cell.bias.segment(0, 4).norm() == 0.0);
  CHECK(cell.bias.segment(8, 8).norm() == 0.0);
}

TEST_CASE("lstm: BPTT over 4 steps matches finite differences") {
  Rng rng(5);
  const Eigen::Index S = 3, H = 4, B = 2, T = 4;
  LstmCell cell(S, H);
  cell.init(rng);
  cell.bias = random_mat(4 * H, 1, rng).col(0) * 0.5;
  std::vector<Mat> xs, readout_h, readout_c;
  for (Eigen::Index t = 0; t < T; ++t) {
    xs.push_back(random_mat(S, B, rng));
    readout_h.push_back(random_mat(H, B, rng));
    readout_c.push_back(random_mat(H, B, rng));
  }
  auto run = [&](std::vector<LstmCache>& caches) {
    caches.assign(static_cast<std::size_t>(T), {});
    Mat h = Mat::Zero(H, B), c = Mat::Zero(H, B);
    double loss = 0.0;
    for (Eigen::Index t = 0; t < T; ++t) {
      auto& cache = caches[static_cast<std::size_t>(t)];
      cell.forward(xs[static_cast<std::size_t>(t)], h, c, cache);
      h = cache.h;
      c = cache.c;
      loss += (h.array() * readout_h[static_cast<std::size_t>(t)].array()).sum();
      loss += (c.array() * readout_c[static_cast<std::size_t>(t)].array()).sum();
    }
    return loss;
  };
  std::vector<LstmCache> caches;
  run(caches);
  cell.zero_grad();
  Mat dh_next = Mat::Zero(H, B), dc_next = Mat::Zero(H, B);
  std::vector<Mat> dxs(static_cast<std::size_t>(T));
  for (Eigen::Index t = T - 1; t >= 0; --t) {
    const auto ut = static_cast<std::size_t>(t);
    Mat dx, dh_prev, dc_prev;
    cell.backward(caches[ut], dh_next + readout_h[ut], dc_next + readout_c[ut], dx, dh_prev, dc_prev);
    dxs[ut] = dx;
    dh_next = dh_prev;
    dc_next = dc_prev;
  }
  std::vector<ParamRef> ps;
  cell.collect("lstm", ps);
  std::vector<LstmCache> scratch;
  const auto r = grad_check([&] { return run(scratch); }, ps, 9);
  CHECK(r.max_rel_error < 1e-5);

  // input gradient of the first step
  const double h = 1e-6;
  xs[0](1, 1) += h;
  const double up = run(scratch);
  xs[0](1, 1) -= 2 * h;
  const double dn = run(scratch);
  xs[0](1, 1) += h;
  CHECK(std::abs((up - dn) / (2 * h) - dxs[0](1, 1)) < 1e-6);
}

TEST_CASE("softmax examples") {
  const Vec u = softmax(Vec(Vec::Zero(3)));
  for (Eigen::Index i = 0; i < 3; ++i) CHECK(u(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  Vec z(2);
  z << 1, 2;
  const Vec p = softmax(z);
  const double e = std::exp(1.0);
  CHECK(std::abs(p(0) - 1.0 / (1.0 + e)) < 1e-15);
  CHECK(std::abs(p(0) - 0.26894) < 1e-5);
  CHECK(std::abs(p(1) - 0.73106) < 1e-5);
  Rng rng(2);
  const Vec r = random_mat(6, 1, rng).col(0);
  CHECK((softmax(Vec(r.array() + 123.0)) - softmax(r)).cwiseAbs().maxCoeff() < 1e-14);
  Vec big(2);
  big << 1000.0, 0.0;
  CHECK(softmax(big)(0) == 1.0);
  Vec bad(2);
  bad << std::nan(""), 0.0;
  CHECK_THROWS_AS(softmax(bad), Error);
}

TEST_CASE("softmax_backward matches finite differences") {
  Rng rng(8);
  const Vec z = random_mat(5, 1, rng).col(0);
  const Vec w = random_mat(5, 1, rng).col(0);
  const Vec p = softmax(z);
  const Mat dz = softmax_backward(p, w);
  for (Eigen::Index i = 0; i < 5; ++i) {
    Vec zp = z, zm = z;
    zp(i) += 1e-6;
    zm(i) -= 1e-6;
    const double fd = (softmax(zp).dot(w) - softmax(zm).dot(w)) / 2e-6;
    CHECK(std::abs(fd - dz(i, 0)) < 1e-8);
  }
}

TEST_CASE("cross entropy examples") {
  const auto zero = cross_entropy(Vec::Zero(2), 1);
  CHECK(zero.loss == doctest::Approx(std::numbers::ln2).epsilon(1e-14));
  CHECK(std::abs(zero.loss - 0.69315) < 1e-5);
  CHECK(std::abs(zero.grad.sum()) < 1e-15);
  Vec peaked(3);
  peaked << -50, 60, -20;
  CHECK(cross_entropy(peaked, 1).loss < 1e-40);
  Rng rng(4);
  const Vec l = random_mat(4, 1, rng).col(0);
  const auto ce = cross_entropy(l, 2);
  CHECK(std::abs(ce.grad.sum()) < 1e-15);
  CHECK(ce.grad(2) < 0.0);
  CHECK_THROWS_AS(cross_entropy(l, 4), Error);
}

TEST_CASE("mse examples") {
  CHECK(mse(0.3, 0.3).loss == 0.0);
  CHECK(mse(0.3, 0.3).grad == 0.0);
  CHECK(mse(1.0, -1.0).loss == 4.0);
  CHECK(mse(1.0, -1.0).grad == 4.0);
  Rng rng(6);
  for (int i = 0; i < 100; ++i) CHECK(mse(rng.normal(), rng.normal()).loss >= 0.0);
}

TEST_CASE("adam: zero gradient leaves parameters in place") {
  Rng rng(1);
  Linear l(3, 2);
  l.init(rng);
  const Mat w0 = l.weight;
  std::vector<ParamRef> ps;
  l.collect("l", ps);
  Adam adam(ps);
  l.zero_grad();
  CHECK(adam.step(1e-3) == AdamOutcome::Applied);
  CHECK(l.weight == w0);
}

TEST_CASE("adam: first step with unit gradient moves each parameter by lr") {
  Rng rng(1);
  Linear l(3, 2);
  l.init(rng);
  const Mat w0 = l.weight;
  const Vec b0 = l.bias;
  std::vector<ParamRef> ps;
  l.collect("l", ps);
  Adam adam(ps);
  l.weight_grad.setOnes();
  l.bias_grad.setOnes();
  adam.step(1e-3);
  // m_hat = 1, v_hat = 1, step = lr / (1 + eps)
  const double step = 1e-3 / (1.0 + 1e-8);
  CHECK(((w0 - l.weight).array() - step).abs().maxCoeff() < 1e-15);
  CHECK(((b0 - l.bias).array() - step).abs().maxCoeff() < 1e-15);
  CHECK(adam.steps() == 1);
}

TEST_CASE("adam: non-finite gradient is skipped") {
  Linear l(2, 1);
  l.weight.setConstant(0.5);
  l.bias.setZero();
  std::vector<ParamRef> ps;
  l.collect("l", ps);
  Adam adam(ps);
  l.weight_grad.setOnes();
  l.bias_grad(0) = std::numeric_limits<double>::infinity();
  CHECK(adam.step(1e-3) == AdamOutcome::SkippedNonFinite);
  CHECK(l.weight(0, 0) == 0.5);
  CHECK(adam.steps() == 0);
}

TEST_CASE("adam: identical runs give identical trajectories") {
  auto run = [] {
    Rng rng(77);
    Linear l(4, 3);
    l.init(rng);
    std::vector<ParamRef> ps;
    l.collect("l", ps);
    Adam adam(ps);
    Rng data(5);
    for (int i = 0; i < 20; ++i) {
      l.zero_grad();
      const Mat x = random_mat(4, 2, data);
      l.backward(x, l.forward(x));
      adam.step(1e-2);
    }
    return l.weight;
  };
  CHECK(run() == run());
}

TEST_CASE("grad_check: exact on a quadratic, flags a corrupted gradient") {
  Rng rng(3);
  Linear l(3, 2);
  l.init(rng);
  std::vector<ParamRef> ps;
  l.collect("q", ps);
  auto loss = [&] { return l.weight.squaredNorm() + 0.5 * l.bias.squaredNorm(); };
  l.weight_grad = 2.0 * l.weight;
  l.bias_grad = l.bias;
  CHECK(grad_check(loss, ps, 1).max_rel_error < 1e-8);
  l.weight_grad *= 1.01;
  const auto bad = grad_check(loss, ps, 1);
  CHECK(bad.max_rel_error > 5e-3);
  CHECK(bad.max_rel_error < 2e-2);
  CHECK(bad.worst_param == "q.weight");
  // values are restored
  CHECK(l.weight_grad.isApprox(2.02 * l.weight));
}

TEST_CASE("grad_check: sampling limits the probed coordinates") {
  Rng rng(3);
  Linear l(10, 10);
  l.init(rng);
  std::vector<ParamRef> ps;
  l.collect("s", ps);
  l.weight_grad = 2.0 * l.weight;
  l.bias_grad = 2.0 * l.bias;
  GradCheckOptions opt;
  opt.samples_per_block = 7;
  const auto r = grad_check([&] { return l.weight.squaredNorm() + l.bias.squaredNorm(); }, ps, 4, opt);
  CHECK(r.coordinates_checked == 14);
  CHECK(r.max_rel_error < 1e-8);
}

TEST_CASE("param helpers") {
  Linear a(2, 2), b(1, 3);
  a.weight.setConstant(1.0);
  a.bias.setConstant(2.0);
  b.weight.setConstant(3.0);
  b.bias.setConstant(4.0);
  std::vector<ParamRef> ps;
  a.collect("a", ps);
  b.collect("b", ps);
  CHECK(param_count(ps) == 4 + 2 + 3 + 3);
  auto flat = flatten_values(ps);
  CHECK(flat.size() == 12);
  for (double& v : flat) v += 1.0;
  assign_values(ps, flat);
  CHECK(a.weight(1, 1) == 2.0);
  CHECK(b.bias(2) == 5.0);
  zero_grads(ps);
  a.weight_grad(0, 0) = 3.0;
  b.bias_grad(1) = 4.0;
  CHECK(grad_norm(ps) == doctest::Approx(5.0));
  scale_grads(ps, 0.5);
  CHECK(grad_norm(ps) == doctest::Approx(2.5));
  CHECK(ps[0].name == "a.weight");
  CHECK(ps[3].name == "b.bias");
}
