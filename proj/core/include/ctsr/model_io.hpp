// Copyright 2026 The CTSR Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CTSR_MODEL_IO_HPP_
#define CTSR_MODEL_IO_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <string_view>

#include "ctsr/checkpoint.hpp"
#include "ctsr/neural_model.hpp"

namespace ctsr {

inline constexpr std::string_view kModelKindKey = "model_kind";
inline constexpr std::string_view kCommonLengthKey = "common_length";

// "rn2d" | "rn1d", He-initialised from `seed`. Throws std::invalid_argument
// for any other kind.
std::unique_ptr<NeuralModel> MakeModel(std::string_view kind, std::uint64_t seed);

struct LoadedModel {
  std::unique_ptr<NeuralModel> model;
  std::size_t common_length = 0;
};

Checkpoint ModelToCheckpoint(const NeuralModel& model, std::size_t common_length);
// Parameter names, order and shapes must match the model kind exactly.
LoadedModel ModelFromCheckpoint(const Checkpoint& ckpt);

void SaveModel(const std::filesystem::path& path, const NeuralModel& model,
               std::size_t common_length);
LoadedModel LoadModel(const std::filesystem::path& path);

}  // namespace ctsr

#endif  // CTSR_MODEL_IO_HPP_
