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

// Synthetic contention model for comparing placements.
//
// Each host offers `capacity` ordinal units per resource. When the summed
// RUV demand of its residents exceeds capacity on a resource, every
// resident gets capacity/demand of that resource. A VM's score is the
// average of its per-resource factors weighted by its own RUV levels, so a
// CPU-heavy VM only cares about CPU contention. Scores are relative, not
// calibrated against any benchmark.

#pragma once

#include <array>
#include <map>
#include <string>

#include "vupic/placer.h"
#include "vupic/ruv.h"

namespace vupic {

enum class WeightMode { kRuvProportional };

struct ContentionModel {
  LevelTriple capacity = kFullHostState;
  WeightMode weight_mode = WeightMode::kRuvProportional;

  void Validate() const;
};

using FactorTriple = std::array<double, 3>;

struct VmScore {
  std::string vm_id;
  std::string host_id;
  double score = 1.0;
  FactorTriple factors{1.0, 1.0, 1.0};
};

using RuvMap = std::map<std::string, ResourceUsageVector>;

/// Demand ledger of `host_id` in a placement result. Throws ValidationError
/// for an unknown host.
[[nodiscard]] LevelTriple HostDemand(const PlacementResult& result, const std::string& host_id);

/// Demand of every host mentioned in `assignment`, recomputed from RUVs.
[[nodiscard]] std::map<std::string, LevelTriple> HostDemands(
    const std::map<std::string, std::string>& assignment, const RuvMap& ruvs);

[[nodiscard]] FactorTriple ContentionFactor(const LevelTriple& demand,
                                            const ContentionModel& model = {});

/// Throws ValidationError if an assigned VM has no RUV.
[[nodiscard]] std::map<std::string, VmScore> ScorePlacement(
    const std::map<std::string, std::string>& assignment, const RuvMap& ruvs,
    const ContentionModel& model = {});

[[nodiscard]] std::map<std::string, VmScore> ScorePlacement(const PlacementResult& result,
                                                            const RuvMap& ruvs,
                                                            const ContentionModel& model = {});

}  // namespace vupic
