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

#ifndef GAM_CHECKPOINT_HPP
#define GAM_CHECKPOINT_HPP

// JSON parameter checkpoints. Each block name maps to its shape and its
// values in row-major order; vocabulary and a config fingerprint travel
// alongside so a checkpoint can be matched to the data it was trained on.

#include <string>
#include <vector>

#include "gam/memory.hpp"

namespace gam {

inline constexpr const char* kCheckpointFormat = "gam-checkpoint/1";

enum class Variant { Gam, GamMem };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct CheckpointMeta {
  Variant variant = Variant::Gam;
  std::vector<std::string> vocab;
  std::string config_fingerprint;
  std::size_t epoch = 0;
};

/// A GAM checkpoint leaves `usefulness` default-initialized and unused.
struct Checkpoint {
  CheckpointMeta meta;
  MemModel model;
};

std::string checkpoint_to_json(const GamModel& model, const CheckpointMeta& meta);
std::string checkpoint_to_json(const MemModel& model, const CheckpointMeta& meta);
Checkpoint parse_checkpoint(const std::string& json_text);

void save_checkpoint(const std::string& path, const GamModel& model, const CheckpointMeta& meta);
void save_checkpoint(const std::string& path, const MemModel& model, const CheckpointMeta& meta);
Checkpoint load_checkpoint(const std::string& path);

/// Reads a whole file; throws Error(Data) when it cannot be opened.
std::string read_file(const std::string& path);
/// Writes a whole file; throws Error(Runtime) on I/O failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace gam

#endif  // GAM_CHECKPOINT_HPP
