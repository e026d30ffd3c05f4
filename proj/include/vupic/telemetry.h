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

// Usage-log ingestion and windowed aggregation.
//
// A log is JSON-lines, one sample per line:
//   {"ts": 12, "vm": "CPU1", "cpu_pct": 81.5, "net_bps": 120, "disk_bps": 0}
// Rates are per-second averages over the sampling interval. The sampling
// cadence is not enforced; windows are selected by timestamp.

#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vupic/ruv.h"

namespace vupic {

struct UsageSample {
  std::int64_t ts = 0;
  std::string vm_id;
  double cpu_pct = 0.0;
  double net_bps = 0.0;
  double disk_bps = 0.0;
};

enum class Statistic { kMean, kMax, kPercentile };

struct AggregationConfig {
  Statistic statistic = Statistic::kMean;
  double percentile = 95.0;  // only read for kPercentile; in (0, 100]
  std::int64_t window_seconds = 120;
  // Right edge of the window (inclusive). Defaults to the newest sample of
  // the VM being aggregated.
  std::optional<std::int64_t> window_end;

  void Validate() const;
};

/// Accepts "mean", "max", "pNN" or "percentile:NN" and updates
/// config.statistic (and config.percentile). Throws ValidationError.
void SetStatisticFromString(std::string_view text, AggregationConfig& config);

[[nodiscard]] std::string StatisticToString(const AggregationConfig& config);

/// Reads every non-blank line as one sample. Throws ParseError with the
/// line number on malformed JSON, a missing field or an invalid value.
[[nodiscard]] std::vector<UsageSample> ParseUsageLog(std::istream& in);

/// Buckets samples per VM, preserving input order inside each bucket.
[[nodiscard]] std::map<std::string, std::vector<UsageSample>> GroupByVm(
    std::span<const UsageSample> samples);

/// Statistic over the samples in (end - window_seconds, end]. Samples are
/// ordered by timestamp first; for duplicate timestamps the last record
/// wins. Throws ValidationError if the window is empty.
[[nodiscard]] ResourceAggregate AggregateSamples(std::span<const UsageSample> samples,
                                                 const AggregationConfig& config);

/// AggregateSamples + ClassifyRuv for every VM. Errors are rethrown with the
/// VM id prepended.
[[nodiscard]] std::map<std::string, ResourceUsageVector> ClassifyVms(
    const std::map<std::string, std::vector<UsageSample>>& logs, const AggregationConfig& config,
    const LevelThresholds& thresholds);

}  // namespace vupic
