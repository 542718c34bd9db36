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

#ifndef GAM_COMMON_HPP
#define GAM_COMMON_HPP

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gam {

// Error categories line up with the CLI exit codes (1 usage, 2 data, 3 runtime).
enum class ErrorKind { Usage = 1, Data = 2, Runtime = 3 };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) { throw Error(ErrorKind::Usage, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::Data, msg); }
[[noreturn]] inline void throw_runtime(const std::string& msg) { throw Error(ErrorKind::Runtime, msg); }

/// Mixes a base seed with a path of stream identifiers (fold, epoch, graph,
/// agent, ...) into an independent 64-bit seed. Built on the SplitMix64
/// finalizer so the mapping is identical on every platform.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Seedable random stream. The engine is std::mt19937_64; the distribution
/// mappings are written out here because the standard library's
/// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
  std::size_t uniform_index(std::size_t n);

  /// Index drawn with probability proportional to weights[i]. Weights must be
  /// non-negative with a positive sum.
  std::size_t categorical(std::span<const double> weights);

  /// Standard normal via Box-Muller.
  double normal();

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

/// Stream tags for derive_seed paths. Values are arbitrary but frozen.
namespace stream {
inline constexpr std::uint64_t kSynth = 0x5359;
inline constexpr std::uint64_t kSubsample = 0x5342;
inline constexpr std::uint64_t kFold = 0x464f;
inline constexpr std::uint64_t kInit = 0x494e;
inline constexpr std::uint64_t kEpoch = 0x4550;
inline constexpr std::uint64_t kGraph = 0x4752;
inline constexpr std::uint64_t kAgent = 0x4147;
inline constexpr std::uint64_t kEval = 0x4556;
inline constexpr std::uint64_t kValidation = 0x5641;
inline constexpr std::uint64_t kView = 0x5657;
}  // namespace stream

}  // namespace gam

#endif  // GAM_COMMON_HPP
