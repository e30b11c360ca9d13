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

#ifndef CTSR_TOOLS_COMMANDS_HPP_
#define CTSR_TOOLS_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ctsr::cli {

// Bad command-line input; reported with exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr const char* kMethodNames[] = {"ed", "dtw", "rn1d", "rn2d"};

struct IngestOptions {
  std::filesystem::path archive;
  std::filesystem::path out;
  std::size_t length = 128;
  std::uint64_t seed = 0;
  std::string ratios = "0.8,0.1,0.1";
};

struct SynthOptions {
  std::filesystem::path out;
  std::size_t length = 128;
  std::uint64_t seed = 0;
  std::size_t domains = 4;
  std::size_t classes = 3;
  std::size_t per_class = 60;
  double noise = 0.3;
  std::string ratios = "0.8,0.1,0.1";
};

struct TrainOptions {
  std::filesystem::path corpus;
  std::string model = "rn2d";
  // Optional starting parameters; otherwise initialized from `seed`.
  std::filesystem::path checkpoint;
  std::filesystem::path out;
  std::size_t epochs = 30;
  std::size_t batch_size = 32;
  std::size_t steps = 200;
  double lr = 1e-3;
  std::size_t val_queries = 500;
  std::size_t k = 10;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct EvalOptions {
  std::filesystem::path corpus;
  std::string methods = "ed,dtw";
  std::vector<std::filesystem::path> checkpoints;
  std::string ks = "10";
  std::string queries = "test";
  std::string database = "train";
  std::filesystem::path out;
  bool per_query = false;
  unsigned threads = 0;
};

struct QueryOptions {
  std::filesystem::path corpus;
  std::string method = "dtw";
  std::filesystem::path checkpoint;
  std::filesystem::path query_file;
  std::optional<std::int64_t> series_id;
  std::size_t top_k = 8;
  std::string database = "all";
  // Optional directory receiving query.csv and manifest.json.
  std::filesystem::path out;
};

struct ExportOptions {
  std::filesystem::path corpus;
  std::filesystem::path out;
};

// Each command reports progress on `out`, warnings on `err`, and throws on
// failure. Returns the process exit code.
int RunIngest(const IngestOptions& o, std::ostream& out, std::ostream& err);
int RunSynth(const SynthOptions& o, std::ostream& out, std::ostream& err);
int RunTrain(const TrainOptions& o, std::ostream& out, std::ostream& err);
int RunEval(const EvalOptions& o, std::ostream& out, std::ostream& err);
int RunQuery(const QueryOptions& o, std::ostream& out, std::ostream& err);
int RunExport(const ExportOptions& o, std::ostream& out, std::ostream& err);

}  // namespace ctsr::cli

#endif  // CTSR_TOOLS_COMMANDS_HPP_
