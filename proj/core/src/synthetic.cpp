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

#include "ctsr/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace ctsr {
namespace {

// Native lengths per family; resampling to the corpus length is part of the
// pipeline under test.
constexpr std::size_t kNativeLength[] = {96, 160, 128, 200};

double Frac(double x) { return x - std::floor(x); }

std::vector<double> Generate(SynthFamily family, std::size_t variant,
                             std::size_t cls, std::size_t n_classes,
                             double noise, std::mt19937_64& rng) {
  const std::size_t n = kNativeLength[static_cast<std::size_t>(family)];
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  const double warp = -0.08 + 0.16 * unit(rng);
  const double phase = unit(rng);
  const double c = static_cast<double>(cls);
  const double v = static_cast<double>(variant);
  std::vector<double> x(n);

  switch (family) {
    case SynthFamily::kSine: {
      const double freq = (2.0 + c + 0.5 * v) * (0.95 + 0.1 * unit(rng));
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        const double tw = t + warp * std::sin(std::numbers::pi * t);
        x[i] = std::sin(kTwoPi * (freq * tw + phase));
      }
      break;
    }
    case SynthFamily::kSquare: {
      const double duty = (c + 1.0) / (static_cast<double>(n_classes) + 1.0);
      const double periods = 3.0 + v;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        const double tw = t + warp * std::sin(std::numbers::pi * t);
        x[i] = Frac(periods * tw + phase) < duty ? 1.0 : -1.0;
      }
      break;
    }
    case SynthFamily::kWalk: {
      const double half = std::max(1.0, (static_cast<double>(n_classes) - 1.0) / 2.0);
      const double drift = (c - (static_cast<double>(n_classes) - 1.0) / 2.0) / half *
                           (0.15 + 0.05 * v);
      const double step = 1.0 / std::sqrt(static_cast<double>(n));
      double level = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        level += drift + step * gauss(rng);
        x[i] = level;
      }
      break;
    }
    case SynthFamily::kDamped: {
      const double decay = 1.0 + 2.5 * c;
      const double freq = 3.0 + v;
      for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n);
        const double tw = t + warp * std::sin(std::numbers::pi * t);
        x[i] = std::exp(-decay * tw) * std::sin(kTwoPi * (freq * tw + phase));
      }
      break;
    }
  }
  for (double& xi : x) xi += noise * gauss(rng);
  return x;
}

}  // namespace

std::string_view SynthFamilyName(SynthFamily f) {
  switch (f) {
    case SynthFamily::kSine: return "sine";
    case SynthFamily::kSquare: return "square";
    case SynthFamily::kWalk: return "walk";
    case SynthFamily::kDamped: return "damped";
  }
  return "?";
}

std::vector<LabeledSeries> SynthesizeRaw(const SynthConfig& config) {
  if (config.n_domains == 0 || config.classes_per_domain == 0 ||
      config.series_per_class == 0) {
    throw std::invalid_argument("SynthesizeRaw: counts must be positive");
  }
  std::mt19937_64 rng(config.seed);
  std::vector<LabeledSeries> out;
  out.reserve(config.n_domains * config.classes_per_domain * config.series_per_class);
  for (std::size_t d = 0; d < config.n_domains; ++d) {
    const auto family = static_cast<SynthFamily>(d % 4);
    const std::size_t variant = d / 4;
    std::string dataset_id(SynthFamilyName(family));
    if (variant > 0) dataset_id += "_" + std::to_string(variant);
    for (std::size_t c = 0; c < config.classes_per_domain; ++c) {
      for (std::size_t i = 0; i < config.series_per_class; ++i) {
        out.push_back({dataset_id,
                       {"c" + std::to_string(c),
                        Generate(family, variant, c, config.classes_per_domain,
                                 config.noise, rng)}});
      }
    }
  }
  return out;
}

CorpusIndex SynthMultidomain(const SynthConfig& config) {
  const auto raw = SynthesizeRaw(config);
  return BuildCorpus(raw, config.ratios, config.length, config.seed);
}

}  // namespace ctsr
