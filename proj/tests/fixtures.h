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

// Shared test inputs: the three-VM worked example, the 8-VM testbed
// (alpha/beta/delta) in its two flavours, and a synthetic usage-log
// generator for the CPU/WEB/DISK archetypes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "vupic/placer.h"
#include "vupic/ruv.h"
#include "vupic/telemetry.h"

namespace vupic::testing {

inline constexpr ResourceUsageVector kCpuArchetype{UsageLevel::kHigh, UsageLevel::kLow,
                                                   UsageLevel::kLow};
inline constexpr ResourceUsageVector kDiskArchetype{UsageLevel::kLow, UsageLevel::kLow,
                                                    UsageLevel::kHigh};
inline constexpr ResourceUsageVector kWebArchetype{UsageLevel::kMedium, UsageLevel::kHigh,
                                                   UsageLevel::kLow};

inline ResourceUsageVector Ruv(int cpu, int net, int disk) {
  return {LevelFromOrdinal(cpu), LevelFromOrdinal(net), LevelFromOrdinal(disk)};
}

inline VmDescriptor Vm(std::string id, ResourceUsageVector ruv, int vcpu = 1,
                       std::optional<std::string> original = std::nullopt) {
  return {std::move(id), ruv, vcpu, std::move(original)};
}

// M1, M2 with V1 (H,M,L), V2 (M,H,L), V3 (M,H,L); no current hosts.
inline std::vector<VmDescriptor> WorkedExampleVms() {
  return {Vm("V1", Ruv(2, 1, 0)), Vm("V2", Ruv(1, 2, 0)), Vm("V3", Ruv(1, 2, 0))};
}

inline std::vector<HostDescriptor> WorkedExampleHosts() { return {{"M1", 1}, {"M2", 1}}; }

inline std::vector<HostDescriptor> TestbedHosts(int pcpu) {
  return {{"alpha", pcpu}, {"beta", pcpu}, {"delta", pcpu}};
}

// Consolidation testbed: RUVs per the classification table, initial hosts
// per the "initial host" column.
inline std::vector<VmDescriptor> ConsolidationVms() {
  return {Vm("CPU1", kCpuArchetype, 1, "alpha"),  Vm("CPU2", kCpuArchetype, 1, "alpha"),
          Vm("DISK1", kDiskArchetype, 1, "beta"), Vm("DISK2", kDiskArchetype, 1, "beta"),
          Vm("WEB1", kWebArchetype, 1, "delta"),  Vm("WEB2", kWebArchetype, 1, "delta"),
          Vm("DBMS1", kDiskArchetype, 1, "beta"), Vm("DBMS2", kDiskArchetype, 1, "delta")};
}

// Multi-VCPU testbed: DBMS1 -> DISK3, DBMS2 -> WEB3, vcpus 1 or 2.
inline std::vector<VmDescriptor> MultiVcpuVms() {
  return {Vm("CPU1", kCpuArchetype, 1, "alpha"),  Vm("CPU2", kCpuArchetype, 2, "alpha"),
          Vm("DISK1", kDiskArchetype, 1, "beta"), Vm("DISK2", kDiskArchetype, 2, "beta"),
          Vm("DISK3", kDiskArchetype, 2, "beta"), Vm("WEB1", kWebArchetype, 1, "delta"),
          Vm("WEB2", kWebArchetype, 2, "delta"),  Vm("WEB3", kWebArchetype, 2, "delta")};
}

enum class Archetype { kCpu, kWeb, kDisk };

inline ResourceUsageVector ExpectedRuv(Archetype a) {
  switch (a) {
    case Archetype::kCpu:
      return kCpuArchetype;
    case Archetype::kWeb:
      return kWebArchetype;
    case Archetype::kDisk:
      break;
  }
  return kDiskArchetype;
}

// 120 s of 2 s samples with jitter that keeps every sample (and so every
// mean) strictly inside the archetype's band:
//   CPU:  cpu 75..90 %, net 0..3000 B/s,        disk 0..3000 B/s
//   WEB:  cpu 21..30 %, net 850K..1.2M B/s,    disk 0..3000 B/s
//   DISK: cpu 0..5 %,   net 0..3000 B/s,        disk 250K..600K B/s
inline std::vector<UsageSample> SyntheticTrace(const std::string& vm_id, Archetype a,
                                               std::uint32_t seed) {
  std::mt19937 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  std::vector<UsageSample> samples;
  for (std::int64_t ts = 2; ts <= 120; ts += 2) {
    UsageSample s;
    s.ts = ts;
    s.vm_id = vm_id;
    switch (a) {
      case Archetype::kCpu:
        s.cpu_pct = uniform(75, 90);
        s.net_bps = uniform(0, 3000);
        s.disk_bps = uniform(0, 3000);
        break;
      case Archetype::kWeb:
        s.cpu_pct = uniform(21, 30);
        s.net_bps = uniform(850'000, 1'200'000);
        s.disk_bps = uniform(0, 3000);
        break;
      case Archetype::kDisk:
        s.cpu_pct = uniform(0, 5);
        s.net_bps = uniform(0, 3000);
        s.disk_bps = uniform(250'000, 600'000);
        break;
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

struct TestbedVm {
  std::string id;
  Archetype archetype;
};

// DBMS VMs behave like the disk archetype.
inline std::vector<TestbedVm> ConsolidationArchetypes() {
  return {{"CPU1", Archetype::kCpu},   {"CPU2", Archetype::kCpu},   {"DISK1", Archetype::kDisk},
          {"DISK2", Archetype::kDisk}, {"WEB1", Archetype::kWeb},   {"WEB2", Archetype::kWeb},
          {"DBMS1", Archetype::kDisk}, {"DBMS2", Archetype::kDisk}};
}

inline void WriteJsonLines(const std::filesystem::path& path,
                           const std::vector<UsageSample>& samples) {
  std::ofstream out(path);
  out.precision(17);
  for (const UsageSample& s : samples) {
    out << "{\"ts\":" << s.ts << ",\"vm\":\"" << s.vm_id << "\",\"cpu_pct\":" << s.cpu_pct
        << ",\"net_bps\":" << s.net_bps << ",\"disk_bps\":" << s.disk_bps << "}\n";
  }
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("vupic-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }
  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace vupic::testing
