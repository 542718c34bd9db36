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

#ifndef GAM_EXPERIMENT_HPP
#define GAM_EXPERIMENT_HPP

// Experiment commands behind the CLI. Every command is a pure function of
// its config: all randomness derives from the one top-level seed, CSV
// outputs carry no timing, and wall-clock goes to the JSON manifest only.

#include <string>
#include <vector>

#include "gam/baselines.hpp"
#include "gam/checkpoint.hpp"

namespace gam {

enum class Method { Gam, GamMem, AggAttr, AggWl };

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct ExperimentConfig {
  std::string dataset;  // JSON dataset path; empty means generate from `synth`
  SynthSpec synth;      // synth.seed is overwritten by `seed`
  Method method = Method::Gam;
  TrainConfig train;    // train.seed is derived from `seed` per run
  std::size_t folds = 5;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::vector<std::size_t> t_values = {1, 3, 6, 9, 12, 15, 18};
  std::size_t views = 20;
  std::size_t walk_len = 12;
  std::size_t checkpoint_every = 5;  // 0 disables periodic checkpoints in `train`
  std::string probe_type = "B";
  std::string checkpoint;            // model file read by `eval`
  std::string checkpoint_dir;        // directory read by `trace`; default <out_dir>/checkpoints

  /// Strict parse: unknown keys and ill-typed values are usage errors.
  static ExperimentConfig from_json_text(const std::string& text);
  /// Canonical JSON (keys sorted) of every field.
  std::string to_json_text() const;
  /// 16 hex digits of FNV-1a over the canonical JSON minus the output paths.
  std::string fingerprint() const;
  /// Throws Error(Usage) if the config cannot drive `command`.
  void validate(const std::string& command) const;
};

/// Config keys accepted by from_json_text, sorted.
const std::vector<std::string>& config_keys();

Dataset load_or_generate(const ExperimentConfig& cfg);

struct CvReport {
  std::vector<double> fold_accuracy;
  std::vector<std::size_t> fold_size;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation; 0 with a single fold
  std::string fingerprint;
  double wall_clock_s = 0.0;

  /// Columns fold, n_test, accuracy; trailing rows "mean" and "sd".
  std::string to_csv() const;
};

double mean_of(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);

struct PartialRow {
  std::size_t fold = 0;
  double full = 0.0;
  double partial = 0.0;
  double diff = 0.0;  // full - partial
  std::string marker;  // "↓" iff diff > 0, "↑" iff diff < 0, else "="
};

struct PartialReport {
  std::vector<PartialRow> rows;
  std::string to_csv() const;
};

struct StudyRow {
  std::size_t steps = 0;
  CvReport cv;
};

struct StudyReport {
  std::vector<StudyRow> rows;
  std::string to_csv() const;
};

struct RankTraceRow {
  std::size_t epoch = 0;
  Vec rank;  // r_1 per type
};

struct RankTrace {
  std::vector<std::string> type_names;
  std::string probe_type;
  std::vector<RankTraceRow> rows;
  /// Columns epoch, probe_type, rank_<type name>...
  std::string to_csv() const;
};

/// r_1 after a single step onto a node of `probe_type` (attributes taken
/// from the first such node in the dataset) from uniform r_0 and zero state.
Vec probe_rank(const GamModel& model, const Vec& probe_attrs);
Vec probe_attributes(const Dataset& d, const std::string& probe_type);

/// Output: <out_dir>/dataset.json.
Dataset cmd_synth(const ExperimentConfig& cfg);
/// Trains on the whole dataset. Outputs model.json, train_report.csv,
/// episode_trace.csv and checkpoints/epoch_NNNN.json every
/// `checkpoint_every` epochs (epoch 0 included).
TrainReport cmd_train(const ExperimentConfig& cfg);
/// Output: eval.csv (graph_id, label, predicted).
EvalResult cmd_eval(const ExperimentConfig& cfg);
/// Output: cv.csv.
CvReport cmd_cv(const ExperimentConfig& cfg);
CvReport cmd_cv(const ExperimentConfig& cfg, const Dataset& d);
/// Output: rank_trace.csv.
RankTrace cmd_trace(const ExperimentConfig& cfg);
/// Output: study.csv.
StudyReport cmd_study(const ExperimentConfig& cfg);
/// Output: partial.csv.
PartialReport cmd_partial(const ExperimentConfig& cfg);

/// Runs one named command, writes <out_dir>/manifest_<command>.json and
/// returns the manifest text.
std::string run_command(const std::string& command, const ExperimentConfig& cfg);

/// Version, git revision and compiler of this build.
std::string build_fingerprint();

}  // namespace gam

#endif  // GAM_EXPERIMENT_HPP
