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

#include "ctsr/model_io.hpp"

#include <stdexcept>
#include <string>

#include "ctsr/error.hpp"
#include "ctsr/rn1d.hpp"
#include "ctsr/rn2d.hpp"

namespace ctsr {

std::unique_ptr<NeuralModel> MakeModel(std::string_view kind, std::uint64_t seed) {
  if (kind == "rn2d") return std::make_unique<Rn2dModel>(Rn2dModel::Initialized(seed));
  if (kind == "rn1d") return std::make_unique<Rn1dEncoder>(Rn1dEncoder::Initialized(seed));
  throw std::invalid_argument("unknown model kind '" + std::string(kind) +
                              "' (expected rn2d or rn1d)");
}

Checkpoint ModelToCheckpoint(const NeuralModel& model, std::size_t common_length) {
  Checkpoint ckpt;
  ckpt.metadata[std::string(kModelKindKey)] = model.kind();
  ckpt.metadata[std::string(kCommonLengthKey)] = std::to_string(common_length);
  for (const Parameter* p : model.Parameters()) {
    ckpt.params.emplace_back(p->name(), p->value());
  }
  return ckpt;
}

LoadedModel ModelFromCheckpoint(const Checkpoint& ckpt) {
  const auto kind = ckpt.metadata.find(std::string(kModelKindKey));
  if (kind == ckpt.metadata.end()) {
    throw std::invalid_argument("checkpoint lacks a model_kind entry");
  }
  LoadedModel out;
  out.model = MakeModel(kind->second, 0);
  const auto length = ckpt.metadata.find(std::string(kCommonLengthKey));
  if (length != ckpt.metadata.end()) out.common_length = std::stoul(length->second);

  const auto params = out.model->Parameters();
  if (params.size() != ckpt.params.size()) {
    throw std::invalid_argument("checkpoint has " +
                                std::to_string(ckpt.params.size()) +
                                " parameters, model expects " +
                                std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, value] = ckpt.params[i];
    if (name != params[i]->name()) {
      throw std::invalid_argument("checkpoint parameter " + std::to_string(i) +
                                  " is '" + name + "', expected '" +
                                  params[i]->name() + "'");
    }
    if (value.shape() != params[i]->value().shape()) {
      throw ShapeError("ModelFromCheckpoint", name,
                       "stored " + ShapeString(value.shape()) + " vs model " +
                           ShapeString(params[i]->value().shape()));
    }
    params[i]->value() = value;
  }
  return out;
}

void SaveModel(const std::filesystem::path& path, const NeuralModel& model,
               std::size_t common_length) {
  SaveCheckpoint(path, ModelToCheckpoint(model, common_length));
}

LoadedModel LoadModel(const std::filesystem::path& path) {
  return ModelFromCheckpoint(LoadCheckpoint(path));
}

}  // namespace ctsr
