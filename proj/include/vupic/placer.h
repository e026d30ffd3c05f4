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

// VUPIC placement.
//
// VMs are taken in descending RUV order. Each VM sees the hosts sorted by
// descending residual state with its current host pulled to the front, and
// is admitted by the first host whose residual strictly dominates its RUV;
// failing that, by the first host whose residual equals it. VMs that fit
// nowhere are "compromised" and placed after the main loop on the best
// remaining host regardless of residual.
//
// The VCPU-constrained variant additionally requires the host to have
// enough free PCPUs at every admission, compromised ones included, and
// reports VMs that fit no host as unfit instead of placing them.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vupic/ruv.h"

namespace vupic {

struct VmDescriptor {
  std::string vm_id;
  ResourceUsageVector ruv;
  int vcpu = 1;
  std::optional<std::string> original_host;
};

struct HostDescriptor {
  std::string host_id;
  int pcpu = 1;
};

struct HostState {
  std::string host_id;
  LevelTriple residual = kFullHostState;
  int pcpu_free = 0;
  // Unclamped sum of resident RUV ordinals.
  LevelTriple demand{0, 0, 0};
  // In placement order.
  std::vector<std::string> resident;

  friend bool operator==(const HostState&, const HostState&) = default;
};

enum class Procedure { kBasic, kVcpuConstrained };

/// Order in which compromised VMs are drained after the main loop.
enum class CompromisedOrder { kFifo, kLifo };

/// Host choice for a compromised VM.
enum class CompromisedStrategy {
  // Front of the residual-sorted host list.
  kFrontHost,
  // Host minimizing sum_j max(0, ruv[j] - residual[j]); ties by sort order.
  kLeastDeficit,
};

/// Secondary key among VMs with equal RUVs; the final key is always the
/// ascending vm id.
enum class VcpuTieBreak { kDescending, kAscending };

struct PlacementOptions {
  CompromisedOrder compromised_order = CompromisedOrder::kFifo;
  CompromisedStrategy compromised_strategy = CompromisedStrategy::kFrontHost;
  VcpuTieBreak vcpu_tie_break = VcpuTieBreak::kDescending;
  // PCPU budget multiplier for the VCPU-constrained procedure; 1.0 means
  // no overcommitment. Budget is floor(pcpu * multiplier).
  double overcommit = 1.0;

  void Validate() const;
  friend bool operator==(const PlacementOptions&, const PlacementOptions&) = default;
};

/// How a VM got its host.
enum class Admission { kDominating, kExactFit, kCompromised };

struct PlacementResult {
  std::map<std::string, std::string> assignment;
  // Pool order, i.e. the order the main loop gave up on them.
  std::vector<std::string> compromised;
  std::vector<std::string> unfit;
  std::map<std::string, Admission> admission;
  // Sorted by host id.
  std::vector<HostState> host_states;

  [[nodiscard]] const HostState* FindHost(const std::string& host_id) const;

  friend bool operator==(const PlacementResult&, const PlacementResult&) = default;
};

struct Migration {
  std::string vm_id;
  std::optional<std::string> from;
  std::string to;

  friend bool operator==(const Migration&, const Migration&) = default;
};

struct MigrationSchedule {
  // Ordered by vm id.
  std::vector<Migration> moves;
  int stay_count = 0;
};

/// Descending RUV (cpu, net, disk priority), then vcpu per the tie-break
/// option, then ascending vm id.
[[nodiscard]] std::vector<VmDescriptor> SortMachinePool(std::vector<VmDescriptor> vms,
                                                        const PlacementOptions& options = {});

/// Indices into `states`: descending residual, ties by ascending host id,
/// then `original` (if given) moved to the front. Throws ValidationError if
/// `original` names no host in `states`.
[[nodiscard]] std::vector<std::size_t> SortHosts(std::span<const HostState> states,
                                                 const std::optional<std::string>& original = {});

[[nodiscard]] PlacementResult PlaceVupic(const std::vector<VmDescriptor>& vms,
                                         const std::vector<HostDescriptor>& hosts,
                                         const PlacementOptions& options = {});

[[nodiscard]] PlacementResult PlaceVupicVcpu(const std::vector<VmDescriptor>& vms,
                                             const std::vector<HostDescriptor>& hosts,
                                             const PlacementOptions& options = {});

[[nodiscard]] PlacementResult Place(Procedure procedure, const std::vector<VmDescriptor>& vms,
                                    const std::vector<HostDescriptor>& hosts,
                                    const PlacementOptions& options = {});

/// Moves are VMs whose new host differs from `before` (a missing or null
/// entry counts as a move from nowhere). VMs absent from `after` are ignored.
[[nodiscard]] MigrationSchedule DiffPlacements(
    const std::map<std::string, std::optional<std::string>>& before,
    const std::map<std::string, std::string>& after);

[[nodiscard]] MigrationSchedule DiffMigrations(
    const PlacementResult& result,
    const std::map<std::string, std::optional<std::string>>& originals);

}  // namespace vupic
