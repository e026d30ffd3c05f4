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

// On-disk formats. Every document is written as canonical JSON: object keys
// sorted, two-space indent, reals rounded to 6 decimal places, trailing
// newline. Files are written to a temporary sibling and renamed into place.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vupic/interference.h"
#include "vupic/placer.h"
#include "vupic/ruv.h"

namespace vupic {

using Json = nlohmann::json;

/// One entry of ruvs.json.
struct RuvRecord {
  ResourceUsageVector ruv;
  int vcpu = 1;

  friend bool operator==(const RuvRecord&, const RuvRecord&) = default;
};

using RuvTable = std::map<std::string, RuvRecord>;

/// vm id -> current host, null for VMs not running anywhere yet.
using CurrentPlacement = std::map<std::string, std::optional<std::string>>;

/// Parsed schedule.json.
struct ScheduleDocument {
  std::map<std::string, std::string> assignment;
  std::vector<std::string> compromised;
  std::vector<std::string> unfit;
  std::vector<Migration> migrations;
  int stay_count = 0;
  Json config;
};

[[nodiscard]] double RoundForOutput(double value);
[[nodiscard]] std::string DumpCanonical(const Json& doc);

[[nodiscard]] Json ReadJsonFile(const std::filesystem::path& path);
void WriteFileAtomic(const std::filesystem::path& path, const std::string& contents);
void WriteJsonFile(const std::filesystem::path& path, const Json& doc);

// Every *FromJson throws ValidationError describing the offending key.

[[nodiscard]] LevelThresholds ThresholdsFromJson(const Json& doc);
[[nodiscard]] Json ThresholdsToJson(const LevelThresholds& thresholds);

[[nodiscard]] RuvTable RuvTableFromJson(const Json& doc);
[[nodiscard]] Json RuvTableToJson(const RuvTable& table);
[[nodiscard]] RuvMap RuvsOf(const RuvTable& table);

/// [{"host_id": "alpha", "pcpu": 4}, ...]. With require_pcpu unset, a
/// missing pcpu defaults to 1.
[[nodiscard]] std::vector<HostDescriptor> HostsFromJson(const Json& doc, bool require_pcpu);

[[nodiscard]] CurrentPlacement CurrentFromJson(const Json& doc);

[[nodiscard]] Json ScheduleToJson(const PlacementResult& result, const MigrationSchedule& schedule,
                                  const Json& config);
[[nodiscard]] ScheduleDocument ScheduleFromJson(const Json& doc);

[[nodiscard]] Json ScoresToJson(const std::map<std::string, VmScore>& scores);
[[nodiscard]] std::map<std::string, VmScore> ScoresFromJson(const Json& doc);

}  // namespace vupic
