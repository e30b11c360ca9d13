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

#ifndef CTSR_SYNTHETIC_HPP_
#define CTSR_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ctsr/dataset.hpp"

namespace ctsr {

// Generator families, cycled through by domain index.
enum class SynthFamily {
  kSine,    // class-specific frequency
  kSquare,  // class-specific duty cycle
  kWalk,    // random walk with class-specific drift
  kDamped,  // damped oscillation with class-specific decay
};

std::string_view SynthFamilyName(SynthFamily f);

struct SynthConfig {
  std::uint64_t seed = 0;
  std::size_t n_domains = 4;
  std::size_t classes_per_domain = 3;
  std::size_t series_per_class = 60;
  std::size_t length = 128;
  double noise = 0.3;
  SplitRatios ratios;
};

// Raw (un-normalised, native-length) labelled series. Every series gets a
// random phase, a mild smooth time warp and additive Gaussian noise.
std::vector<LabeledSeries> SynthesizeRaw(const SynthConfig& config);

// SynthesizeRaw followed by BuildCorpus with the same seed.
CorpusIndex SynthMultidomain(const SynthConfig& config);

}  // namespace ctsr

#endif  // CTSR_SYNTHETIC_HPP_
