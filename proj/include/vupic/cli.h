// Copyright 2026 The VUPIC Authors.
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

// The four batch commands behind the `vupic` binary. Each one reads its
// inputs, writes its outputs atomically and echoes a table to `out`. Any
// failure is thrown as ValidationError before an output file is touched.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "vupic/formats.h"
#include "vupic/interference.h"
#include "vupic/placer.h"
#include "vupic/telemetry.h"

namespace vupic::cli {

namespace fs = std::filesystem;

/// Defaults read from a JSON config file (--config or $VUPIC_CONFIG).
/// Command-line flags override every field.
struct RunConfig {
  std::optional<fs::path> thresholds;
  std::optional<std::string> statistic;
  std::optional<std::int64_t> window_seconds;
  std::optional<Procedure> procedure;
  std::optional<CompromisedStrategy> compromised_strategy;
  std::optional<CompromisedOrder> compromised_order;
  std::optional<VcpuTieBreak> vcpu_tie_break;
  std::optional<double> overcommit;
  std::optional<LevelTriple> capacity;
};

[[nodiscard]] RunConfig LoadRunConfig(const fs::path& path);

[[nodiscard]] Procedure ParseProcedure(const std::string& text);
[[nodiscard]] CompromisedStrategy ParseCompromisedStrategy(const std::string& text);
[[nodiscard]] CompromisedOrder ParseCompromisedOrder(const std::string& text);
[[nodiscard]] VcpuTieBreak ParseVcpuTieBreak(const std::string& text);
[[nodiscard]] std::string ToString(Procedure procedure);
[[nodiscard]] std::string ToString(CompromisedStrategy strategy);
[[nodiscard]] std::string ToString(CompromisedOrder order);
[[nodiscard]] std::string ToString(VcpuTieBreak tie_break);

struct ClassifyArgs {
  // A directory (every regular file in it, by name) or a single log file.
  fs::path logs;
  std::optional<fs::path> thresholds;
  // {"vm": 2, ...} or {"vm": {"vcpu": 2}, ...}; VMs not listed get 1.
  std::optional<fs::path> vm_spec;
  AggregationConfig aggregation;
  fs::path output = "ruvs.json";
};

struct PlaceArgs {
  fs::path ruvs;
  fs::path hosts;
  std::optional<fs::path> current;
  Procedure procedure = Procedure::kBasic;
  PlacementOptions options;
  fs::path output = "schedule.json";
};

struct SimulateArgs {
  fs::path schedule;
  fs::path ruvs;
  // current.json-style placement to compare against.
  std::optional<fs::path> baseline;
  ContentionModel model;
  fs::path output = "scores.json";
  // Defaults to `output` with a .csv extension when a baseline is given.
  std::optional<fs::path> csv;
  std::optional<fs::path> baseline_output;
};

struct ReportArgs {
  fs::path before;
  fs::path after;
  fs::path schedule;
  fs::path output = "report.csv";
};

RuvTable RunClassify(const ClassifyArgs& args, std::ostream& out);
ScheduleDocument RunPlace(const PlaceArgs& args, std::ostream& out);
std::map<std::string, VmScore> RunSimulate(const SimulateArgs& args, std::ostream& out);
void RunReport(const ReportArgs& args, std::ostream& out);

/// Entry point used by the binary; returns the process exit status.
int Main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace vupic::cli
