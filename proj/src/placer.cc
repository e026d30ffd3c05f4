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

#include "vupic/placer.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>

#include "vupic/error.h"

namespace vupic {

namespace {

void ValidateInputs(const std::vector<VmDescriptor>& vms, const std::vector<HostDescriptor>& hosts) {
  if (hosts.empty()) throw ValidationError("placement needs at least one host");
  std::set<std::string> host_ids;
  for (const HostDescriptor& h : hosts) {
    if (h.host_id.empty()) throw ValidationError("host id must not be empty");
    if (h.pcpu < 1) throw ValidationError("host " + h.host_id + ": pcpu must be >= 1");
    if (!host_ids.insert(h.host_id).second) {
      throw ValidationError("duplicate host id " + h.host_id);
    }
  }
  std::set<std::string> vm_ids;
  for (const VmDescriptor& vm : vms) {
    if (vm.vm_id.empty()) throw ValidationError("vm id must not be empty");
    if (vm.vcpu < 1) throw ValidationError("vm " + vm.vm_id + ": vcpu must be >= 1");
    if (!vm_ids.insert(vm.vm_id).second) throw ValidationError("duplicate vm id " + vm.vm_id);
  }
}

int Deficit(const LevelTriple& residual, const ResourceUsageVector& ruv) {
  const LevelTriple demand = ruv.ordinals();
  int total = 0;
  for (std::size_t j = 0; j < residual.size(); ++j) total += std::max(0, demand[j] - residual[j]);
  return total;
}

// Mutable working set for one placement run.
class Placer {
 public:
  Placer(Procedure procedure, const std::vector<HostDescriptor>& hosts,
         const PlacementOptions& options)
      : procedure_(procedure), options_(options) {
    states_.reserve(hosts.size());
    for (const HostDescriptor& h : hosts) {
      HostState state;
      state.host_id = h.host_id;
      state.pcpu_free = procedure == Procedure::kVcpuConstrained
                            ? static_cast<int>(std::floor(h.pcpu * options.overcommit))
                            : h.pcpu;
      states_.push_back(std::move(state));
    }
    std::sort(states_.begin(), states_.end(),
              [](const HostState& a, const HostState& b) { return a.host_id < b.host_id; });
  }

  PlacementResult Run(const std::vector<VmDescriptor>& vms) {
    const std::vector<VmDescriptor> pool =
        SortMachinePool(std::vector<VmDescriptor>(vms.begin(), vms.end()), options_);

    std::deque<const VmDescriptor*> compromised;
    for (const VmDescriptor& vm : pool) {
      const std::vector<std::size_t> order = SortHosts(states_, LiveOriginal(vm));
      if (TryAdmit(vm, order, &Dominates, Admission::kDominating)) continue;
      if (TryAdmit(vm, order, &ExactlyFits, Admission::kExactFit)) continue;
      compromised.push_back(&vm);
      result_.compromised.push_back(vm.vm_id);
    }

    while (!compromised.empty()) {
      const VmDescriptor* vm;
      if (options_.compromised_order == CompromisedOrder::kFifo) {
        vm = compromised.front();
        compromised.pop_front();
      } else {
        vm = compromised.back();
        compromised.pop_back();
      }
      PlaceCompromised(*vm);
    }

    result_.host_states = std::move(states_);
    return std::move(result_);
  }

 private:
  std::optional<std::string> LiveOriginal(const VmDescriptor& vm) const {
    if (!vm.original_host) return std::nullopt;
    const bool alive = std::any_of(states_.begin(), states_.end(), [&](const HostState& s) {
      return s.host_id == *vm.original_host;
    });
    return alive ? vm.original_host : std::nullopt;
  }

  bool HasPcpu(const HostState& host, const VmDescriptor& vm) const {
    return procedure_ == Procedure::kBasic || host.pcpu_free >= vm.vcpu;
  }

  bool TryAdmit(const VmDescriptor& vm, const std::vector<std::size_t>& order,
                bool (*test)(const LevelTriple&, const ResourceUsageVector&), Admission how) {
    for (std::size_t idx : order) {
      if (test(states_[idx].residual, vm.ruv) && HasPcpu(states_[idx], vm)) {
        Assign(vm, idx, how);
        return true;
      }
    }
    return false;
  }

  void PlaceCompromised(const VmDescriptor& vm) {
    std::optional<std::size_t> chosen;
    int best_deficit = 0;
    for (std::size_t idx : SortHosts(states_)) {
      if (!HasPcpu(states_[idx], vm)) continue;
      if (options_.compromised_strategy == CompromisedStrategy::kFrontHost) {
        chosen = idx;
        break;
      }
      const int deficit = Deficit(states_[idx].residual, vm.ruv);
      if (!chosen || deficit < best_deficit) {
        chosen = idx;
        best_deficit = deficit;
      }
    }
    if (!chosen) {
      result_.unfit.push_back(vm.vm_id);
      return;
    }
    Assign(vm, *chosen, Admission::kCompromised);
  }

  void Assign(const VmDescriptor& vm, std::size_t idx, Admission how) {
    HostState& host = states_[idx];
    host.residual = SubtractSaturating(host.residual, vm.ruv);
    const LevelTriple demand = vm.ruv.ordinals();
    for (std::size_t j = 0; j < demand.size(); ++j) host.demand[j] += demand[j];
    host.pcpu_free -= vm.vcpu;
    host.resident.push_back(vm.vm_id);
    result_.assignment[vm.vm_id] = host.host_id;
    result_.admission[vm.vm_id] = how;
  }

  Procedure procedure_;
  PlacementOptions options_;
  std::vector<HostState> states_;
  PlacementResult result_;
};

}  // namespace

void PlacementOptions::Validate() const {
  if (!std::isfinite(overcommit) || overcommit < 1.0) {
    throw ValidationError("overcommit multiplier must be >= 1.0");
  }
}

const HostState* PlacementResult::FindHost(const std::string& host_id) const {
  auto it = std::find_if(host_states.begin(), host_states.end(),
                         [&](const HostState& s) { return s.host_id == host_id; });
  return it == host_states.end() ? nullptr : &*it;
}

std::vector<VmDescriptor> SortMachinePool(std::vector<VmDescriptor> vms,
                                          const PlacementOptions& options) {
  std::sort(vms.begin(), vms.end(), [&](const VmDescriptor& a, const VmDescriptor& b) {
    if (auto c = LexCompare(a.ruv.ordinals(), b.ruv.ordinals()); c != 0) return c > 0;
    if (a.vcpu != b.vcpu) {
      return options.vcpu_tie_break == VcpuTieBreak::kDescending ? a.vcpu > b.vcpu
                                                                 : a.vcpu < b.vcpu;
    }
    return a.vm_id < b.vm_id;
  });
  return vms;
}

std::vector<std::size_t> SortHosts(std::span<const HostState> states,
                                   const std::optional<std::string>& original) {
  std::vector<std::size_t> order(states.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (auto c = LexCompare(states[a].residual, states[b].residual); c != 0) return c > 0;
    return states[a].host_id < states[b].host_id;
  });
  if (original) {
    auto it = std::find_if(order.begin(), order.end(),
                           [&](std::size_t idx) { return states[idx].host_id == *original; });
    if (it == order.end()) throw ValidationError("unknown original host " + *original);
    std::rotate(order.begin(), it, it + 1);
  }
  return order;
}

PlacementResult Place(Procedure procedure, const std::vector<VmDescriptor>& vms,
                      const std::vector<HostDescriptor>& hosts, const PlacementOptions& options) {
  options.Validate();
  ValidateInputs(vms, hosts);
  return Placer(procedure, hosts, options).Run(vms);
}

PlacementResult PlaceVupic(const std::vector<VmDescriptor>& vms,
                           const std::vector<HostDescriptor>& hosts,
                           const PlacementOptions& options) {
  return Place(Procedure::kBasic, vms, hosts, options);
}

PlacementResult PlaceVupicVcpu(const std::vector<VmDescriptor>& vms,
                               const std::vector<HostDescriptor>& hosts,
                               const PlacementOptions& options) {
  return Place(Procedure::kVcpuConstrained, vms, hosts, options);
}

MigrationSchedule DiffPlacements(const std::map<std::string, std::optional<std::string>>& before,
                                 const std::map<std::string, std::string>& after) {
  MigrationSchedule schedule;
  for (const auto& [vm_id, to] : after) {
    std::optional<std::string> from;
    if (auto it = before.find(vm_id); it != before.end()) from = it->second;
    if (from && *from == to) {
      ++schedule.stay_count;
    } else {
      schedule.moves.push_back({vm_id, from, to});
    }
  }
  return schedule;
}

MigrationSchedule DiffMigrations(const PlacementResult& result,
                                 const std::map<std::string, std::optional<std::string>>& originals) {
  return DiffPlacements(originals, result.assignment);
}

}  // namespace vupic
