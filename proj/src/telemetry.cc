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

#include "vupic/telemetry.h"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "vupic/error.h"

namespace vupic {

namespace {

using nlohmann::json;

double ReadRate(const json& record, const char* field, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end()) throw ParseError(line, std::string("missing field \"") + field + "\"");
  if (!it->is_number()) throw ParseError(line, std::string("field \"") + field + "\" must be a number");
  const double value = it->get<double>();
  if (!std::isfinite(value) || value < 0.0) {
    throw ParseError(line, std::string("field \"") + field + "\" must be finite and non-negative");
  }
  return value;
}

double Percentile(std::vector<double> values, double p) {
  std::sort(values.begin(), values.end());
  // Nearest rank.
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * n));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

double Reduce(const std::vector<double>& values, const AggregationConfig& config) {
  switch (config.statistic) {
    case Statistic::kMean:
      return std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
    case Statistic::kMax:
      return *std::max_element(values.begin(), values.end());
    case Statistic::kPercentile:
      return Percentile(values, config.percentile);
  }
  return 0.0;
}

}  // namespace

void AggregationConfig::Validate() const {
  if (window_seconds <= 0) throw ValidationError("window_seconds must be positive");
  if (statistic == Statistic::kPercentile && !(percentile > 0.0 && percentile <= 100.0)) {
    throw ValidationError("percentile must be in (0, 100]");
  }
}

void SetStatisticFromString(std::string_view text, AggregationConfig& config) {
  if (text == "mean") {
    config.statistic = Statistic::kMean;
    return;
  }
  if (text == "max") {
    config.statistic = Statistic::kMax;
    return;
  }
  std::string_view number;
  if (text.starts_with("percentile:")) {
    number = text.substr(11);
  } else if (text.starts_with("p")) {
    number = text.substr(1);
  } else {
    throw ValidationError("unknown statistic \"" + std::string(text) + "\"");
  }
  double p = 0.0;
  const char* first = number.data();
  const char* last = number.data() + number.size();
  auto [ptr, ec] = std::from_chars(first, last, p);
  if (number.empty() || ec != std::errc() || ptr != last) {
    throw ValidationError("bad percentile in statistic \"" + std::string(text) + "\"");
  }
  config.statistic = Statistic::kPercentile;
  config.percentile = p;
  config.Validate();
}

std::string StatisticToString(const AggregationConfig& config) {
  switch (config.statistic) {
    case Statistic::kMean:
      return "mean";
    case Statistic::kMax:
      return "max";
    case Statistic::kPercentile:
      break;
  }
  json p = config.percentile;
  return "p" + p.dump();
}

std::vector<UsageSample> ParseUsageLog(std::istream& in) {
  std::vector<UsageSample> samples;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    json record;
    try {
      record = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(line, std::string("malformed JSON: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(line, "expected a JSON object");

    UsageSample sample;
    auto ts = record.find("ts");
    if (ts == record.end()) throw ParseError(line, "missing field \"ts\"");
    if (!ts->is_number_integer()) throw ParseError(line, "field \"ts\" must be an integer");
    sample.ts = ts->get<std::int64_t>();

    auto vm = record.find("vm");
    if (vm == record.end()) vm = record.find("vm_id");
    if (vm == record.end()) throw ParseError(line, "missing field \"vm\"");
    if (!vm->is_string() || vm->get_ref<const std::string&>().empty()) {
      throw ParseError(line, "field \"vm\" must be a non-empty string");
    }
    sample.vm_id = vm->get<std::string>();

    sample.cpu_pct = ReadRate(record, "cpu_pct", line);
    sample.net_bps = ReadRate(record, "net_bps", line);
    sample.disk_bps = ReadRate(record, "disk_bps", line);
    samples.push_back(std::move(sample));
  }
  return samples;
}

std::map<std::string, std::vector<UsageSample>> GroupByVm(std::span<const UsageSample> samples) {
  std::map<std::string, std::vector<UsageSample>> grouped;
  for (const UsageSample& s : samples) grouped[s.vm_id].push_back(s);
  return grouped;
}

ResourceAggregate AggregateSamples(std::span<const UsageSample> samples,
                                   const AggregationConfig& config) {
  config.Validate();
  if (samples.empty()) throw ValidationError("no samples to aggregate");

  // Stable sort keeps input order among equal timestamps, so the last
  // record of a duplicate run is the one that survives.
  std::vector<UsageSample> ordered(samples.begin(), samples.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const UsageSample& a, const UsageSample& b) { return a.ts < b.ts; });

  const std::int64_t end = config.window_end.value_or(ordered.back().ts);
  const std::int64_t begin = end - config.window_seconds;  // exclusive

  std::vector<double> cpu;
  std::vector<double> net;
  std::vector<double> disk;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    const UsageSample& s = ordered[i];
    if (i + 1 < ordered.size() && ordered[i + 1].ts == s.ts) continue;
    if (s.ts <= begin || s.ts > end) continue;
    cpu.push_back(s.cpu_pct);
    net.push_back(s.net_bps);
    disk.push_back(s.disk_bps);
  }
  if (cpu.empty()) {
    throw ValidationError("no samples in window (" + std::to_string(begin) + ", " +
                          std::to_string(end) + "]");
  }
  return {Reduce(cpu, config), Reduce(net, config), Reduce(disk, config)};
}

std::map<std::string, ResourceUsageVector> ClassifyVms(
    const std::map<std::string, std::vector<UsageSample>>& logs, const AggregationConfig& config,
    const LevelThresholds& thresholds) {
  thresholds.Validate();
  std::map<std::string, ResourceUsageVector> ruvs;
  for (const auto& [vm_id, samples] : logs) {
    try {
      ruvs.emplace(vm_id, ClassifyRuv(AggregateSamples(samples, config), thresholds));
    } catch (const ValidationError& e) {
      throw ValidationError("vm " + vm_id + ": " + e.what());
    }
  }
  return ruvs;
}

}  // namespace vupic
