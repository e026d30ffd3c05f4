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

#include "vupic/ruv.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "vupic/error.h"

namespace vupic {

UsageLevel LevelFromOrdinal(int ordinal) {
  if (ordinal < 0 || ordinal > kMaxLevel) {
    throw ValidationError("usage level ordinal out of range: " + std::to_string(ordinal));
  }
  return static_cast<UsageLevel>(ordinal);
}

char ToSymbol(UsageLevel level) {
  switch (level) {
    case UsageLevel::kLow:
      return 'L';
    case UsageLevel::kMedium:
      return 'M';
    case UsageLevel::kHigh:
      return 'H';
  }
  return '?';
}

UsageLevel LevelFromSymbol(std::string_view symbol) {
  if (symbol == "L") return UsageLevel::kLow;
  if (symbol == "M") return UsageLevel::kMedium;
  if (symbol == "H") return UsageLevel::kHigh;
  throw ValidationError("unknown usage level \"" + std::string(symbol) + "\" (expected L, M or H)");
}

std::string_view ResourceName(Resource resource) {
  switch (resource) {
    case Resource::kCpu:
      return "cpu";
    case Resource::kNet:
      return "net";
    case Resource::kDisk:
      return "disk";
  }
  return "?";
}

UsageLevel ResourceUsageVector::operator[](Resource resource) const {
  switch (resource) {
    case Resource::kCpu:
      return cpu;
    case Resource::kNet:
      return net;
    case Resource::kDisk:
      return disk;
  }
  return UsageLevel::kLow;
}

std::string ResourceUsageVector::ToString() const {
  return std::string{'<', ToSymbol(cpu), ',', ToSymbol(net), ',', ToSymbol(disk), '>'};
}

const LevelBounds& LevelThresholds::For(Resource resource) const {
  switch (resource) {
    case Resource::kCpu:
      return cpu;
    case Resource::kNet:
      return net;
    case Resource::kDisk:
      break;
  }
  return disk;
}

void LevelThresholds::Validate() const {
  for (Resource r : kAllResources) {
    const LevelBounds& b = For(r);
    if (!std::isfinite(b.m_lower) || !std::isfinite(b.h_lower) || !(b.m_lower > 0.0) ||
        !(b.m_lower < b.h_lower)) {
      throw ValidationError("thresholds for " + std::string(ResourceName(r)) +
                            " must satisfy 0 < m_lower < h_lower");
    }
  }
  if (cpu.h_lower > 100.0) {
    throw ValidationError("cpu h_lower must not exceed 100 (percent)");
  }
}

double ResourceAggregate::operator[](Resource resource) const {
  switch (resource) {
    case Resource::kCpu:
      return cpu_pct;
    case Resource::kNet:
      return net_bps;
    case Resource::kDisk:
      break;
  }
  return disk_bps;
}

UsageLevel ClassifyComponent(double value, Resource resource, const LevelThresholds& thresholds) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(std::string(ResourceName(resource)) +
                          " usage must be finite and non-negative, got " + std::to_string(value));
  }
  if (resource == Resource::kCpu) value = std::min(value, 100.0);
  const LevelBounds& b = thresholds.For(resource);
  if (value >= b.h_lower) return UsageLevel::kHigh;
  if (value >= b.m_lower) return UsageLevel::kMedium;
  return UsageLevel::kLow;
}

ResourceUsageVector ClassifyRuv(const ResourceAggregate& aggregate,
                                const LevelThresholds& thresholds) {
  return {ClassifyComponent(aggregate.cpu_pct, Resource::kCpu, thresholds),
          ClassifyComponent(aggregate.net_bps, Resource::kNet, thresholds),
          ClassifyComponent(aggregate.disk_bps, Resource::kDisk, thresholds)};
}

bool Dominates(const LevelTriple& state, const ResourceUsageVector& ruv) {
  const LevelTriple demand = ruv.ordinals();
  bool strict = false;
  for (std::size_t j = 0; j < state.size(); ++j) {
    if (state[j] < demand[j]) return false;
    if (state[j] > demand[j]) strict = true;
  }
  return strict;
}

bool ExactlyFits(const LevelTriple& state, const ResourceUsageVector& ruv) {
  return state == ruv.ordinals();
}

std::strong_ordering LexCompare(const LevelTriple& a, const LevelTriple& b) {
  return a <=> b;
}

LevelTriple SubtractSaturating(const LevelTriple& state, const ResourceUsageVector& ruv) {
  const LevelTriple demand = ruv.ordinals();
  LevelTriple out{};
  for (std::size_t j = 0; j < state.size(); ++j) {
    out[j] = std::max(0, state[j] - demand[j]);
  }
  return out;
}

}  // namespace vupic
