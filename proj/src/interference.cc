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

#include "vupic/interference.h"

#include "vupic/error.h"

namespace vupic {

void ContentionModel::Validate() const {
  for (int c : capacity) {
    if (c < 1) throw ValidationError("contention capacity components must be >= 1");
  }
}

LevelTriple HostDemand(const PlacementResult& result, const std::string& host_id) {
  const HostState* host = result.FindHost(host_id);
  if (host == nullptr) throw ValidationError("unknown host " + host_id);
  return host->demand;
}

std::map<std::string, LevelTriple> HostDemands(const std::map<std::string, std::string>& assignment,
                                               const RuvMap& ruvs) {
  std::map<std::string, LevelTriple> demands;
  for (const auto& [vm_id, host_id] : assignment) {
    auto ruv = ruvs.find(vm_id);
    if (ruv == ruvs.end()) throw ValidationError("no RUV for vm " + vm_id);
    LevelTriple& d = demands.try_emplace(host_id, LevelTriple{0, 0, 0}).first->second;
    const LevelTriple levels = ruv->second.ordinals();
    for (std::size_t j = 0; j < d.size(); ++j) d[j] += levels[j];
  }
  return demands;
}

FactorTriple ContentionFactor(const LevelTriple& demand, const ContentionModel& model) {
  FactorTriple factors{};
  for (std::size_t j = 0; j < demand.size(); ++j) {
    factors[j] = demand[j] <= model.capacity[j]
                     ? 1.0
                     : static_cast<double>(model.capacity[j]) / static_cast<double>(demand[j]);
  }
  return factors;
}

std::map<std::string, VmScore> ScorePlacement(const std::map<std::string, std::string>& assignment,
                                              const RuvMap& ruvs, const ContentionModel& model) {
  model.Validate();
  const std::map<std::string, LevelTriple> demands = HostDemands(assignment, ruvs);

  std::map<std::string, VmScore> scores;
  for (const auto& [vm_id, host_id] : assignment) {
    VmScore s;
    s.vm_id = vm_id;
    s.host_id = host_id;
    s.factors = ContentionFactor(demands.at(host_id), model);

    const LevelTriple weights = ruvs.at(vm_id).ordinals();
    const int total = weights[0] + weights[1] + weights[2];
    if (total > 0) {
      s.score = 0.0;
      for (std::size_t j = 0; j < weights.size(); ++j) {
        s.score += static_cast<double>(weights[j]) / total * s.factors[j];
      }
    }
    scores.emplace(vm_id, std::move(s));
  }
  return scores;
}

std::map<std::string, VmScore> ScorePlacement(const PlacementResult& result, const RuvMap& ruvs,
                                              const ContentionModel& model) {
  return ScorePlacement(result.assignment, ruvs, model);
}

}  // namespace vupic
