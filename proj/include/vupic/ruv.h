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

// Usage levels, the three-component Resource Usage Vector (RUV) and the
// ordinal arithmetic the placer is built on.
//
// Levels are ordinals: L=0, M=1, H=2. A host with nothing on it has the
// residual state (2,2,2), i.e. <H,H,H>. Placing a VM subtracts its RUV from
// the residual, saturating at L.

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace vupic {

enum class UsageLevel : std::uint8_t { kLow = 0, kMedium = 1, kHigh = 2 };

enum class Resource : std::uint8_t { kCpu = 0, kNet = 1, kDisk = 2 };

inline constexpr std::array<Resource, 3> kAllResources = {Resource::kCpu, Resource::kNet,
                                                          Resource::kDisk};
inline constexpr int kMaxLevel = 2;

[[nodiscard]] constexpr int Ordinal(UsageLevel level) { return static_cast<int>(level); }

/// Throws ValidationError outside {0, 1, 2}.
[[nodiscard]] UsageLevel LevelFromOrdinal(int ordinal);

/// 'L', 'M' or 'H'.
[[nodiscard]] char ToSymbol(UsageLevel level);

/// Accepts "L", "M", "H" (case-sensitive). Throws ValidationError otherwise.
[[nodiscard]] UsageLevel LevelFromSymbol(std::string_view symbol);

[[nodiscard]] std::string_view ResourceName(Resource resource);

/// Componentwise integer triple ordered (cpu, net, disk). Used for host
/// residual states (components in [0, 2]) and for unclamped demand sums.
using LevelTriple = std::array<int, 3>;

inline constexpr LevelTriple kFullHostState = {kMaxLevel, kMaxLevel, kMaxLevel};

struct ResourceUsageVector {
  UsageLevel cpu = UsageLevel::kLow;
  UsageLevel net = UsageLevel::kLow;
  UsageLevel disk = UsageLevel::kLow;

  [[nodiscard]] UsageLevel operator[](Resource resource) const;
  [[nodiscard]] LevelTriple ordinals() const {
    return {Ordinal(cpu), Ordinal(net), Ordinal(disk)};
  }
  /// "<H,L,L>"
  [[nodiscard]] std::string ToString() const;

  friend bool operator==(const ResourceUsageVector&, const ResourceUsageVector&) = default;
};

/// Half-open bounds for one resource: [0, m_lower) -> L,
/// [m_lower, h_lower) -> M, [h_lower, inf) -> H.
struct LevelBounds {
  double m_lower = 0.0;
  double h_lower = 0.0;

  friend bool operator==(const LevelBounds&, const LevelBounds&) = default;
};

struct LevelThresholds {
  LevelBounds cpu{20.0, 70.0};         // percent
  LevelBounds net{10'000.0, 800'000.0};  // bytes/sec
  LevelBounds disk{10'000.0, 200'000.0};  // bytes/sec

  [[nodiscard]] const LevelBounds& For(Resource resource) const;

  /// Requires 0 < m_lower < h_lower everywhere and cpu.h_lower <= 100.
  void Validate() const;

  friend bool operator==(const LevelThresholds&, const LevelThresholds&) = default;
};

/// Windowed statistic of one VM's usage.
struct ResourceAggregate {
  double cpu_pct = 0.0;
  double net_bps = 0.0;
  double disk_bps = 0.0;

  [[nodiscard]] double operator[](Resource resource) const;
};

/// Maps a raw usage value onto L/M/H. CPU values above 100 are clamped to
/// 100 first. Throws ValidationError for negative or non-finite values.
[[nodiscard]] UsageLevel ClassifyComponent(double value, Resource resource,
                                           const LevelThresholds& thresholds);

[[nodiscard]] ResourceUsageVector ClassifyRuv(const ResourceAggregate& aggregate,
                                              const LevelThresholds& thresholds);

/// Strict componentwise domination: state >= ruv everywhere and > somewhere.
/// This is the first-pass admission test of the placer.
[[nodiscard]] bool Dominates(const LevelTriple& state, const ResourceUsageVector& ruv);

/// Componentwise equality; the second-pass admission test.
[[nodiscard]] bool ExactlyFits(const LevelTriple& state, const ResourceUsageVector& ruv);

/// Lexicographic with priority cpu, net, disk.
[[nodiscard]] std::strong_ordering LexCompare(const LevelTriple& a, const LevelTriple& b);

[[nodiscard]] LevelTriple SubtractSaturating(const LevelTriple& state,
                                             const ResourceUsageVector& ruv);

}  // namespace vupic
