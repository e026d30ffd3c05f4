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

#include "property_suite.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "vupic/ruv.h"

namespace vupic::testing {
namespace {

int Pick(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

ResourceUsageVector RandomRuv(std::mt19937& rng) {
  return {LevelFromOrdinal(Pick(rng, 0, 2)), LevelFromOrdinal(Pick(rng, 0, 2)),
          LevelFromOrdinal(Pick(rng, 0, 2))};
}

std::string HostName(int i) { return "h" + std::to_string(i); }

int Budget(const HostDescriptor& h, Procedure procedure, const PlacementOptions& options) {
  return procedure == Procedure::kVcpuConstrained
             ? static_cast<int>(std::floor(h.pcpu * options.overcommit))
             : h.pcpu;
}

std::string Fail(const Instance& instance, const std::string& what) {
  return what + "\n" + Describe(instance);
}

}  // namespace

// Independent of the placer's own host ordering: only the existence of
// passing hosts and the original-host preference are checked.
std::string CheckMainLoop(const Instance& in, Procedure procedure) {
  const PlacementResult r = Place(procedure, in.vms, in.hosts, in.options);
  struct Slot {
    LevelTriple residual = kFullHostState;
    int pcpu_free = 0;
    LevelTriple admitted_demand{0, 0, 0};
  };
  std::map<std::string, Slot> slots;
  for (const HostDescriptor& h : in.hosts) slots[h.host_id].pcpu_free = Budget(h, procedure, in.options);
  const std::set<std::string> compromised(r.compromised.begin(), r.compromised.end());

  std::vector<std::string> seen_compromised;
  for (const VmDescriptor& vm : SortMachinePool(in.vms, in.options)) {
    auto eligible = [&](const Slot& s) {
      return procedure == Procedure::kBasic || s.pcpu_free >= vm.vcpu;
    };
    bool any_dom = false;
    bool any_exact = false;
    for (const auto& [id, s] : slots) {
      if (!eligible(s)) continue;
      any_dom = any_dom || Dominates(s.residual, vm.ruv);
      any_exact = any_exact || ExactlyFits(s.residual, vm.ruv);
    }
    if (compromised.contains(vm.vm_id)) {
      if (any_dom || any_exact) return Fail(in, vm.vm_id + " compromised although a host passed");
      if (r.admission.contains(vm.vm_id) && r.admission.at(vm.vm_id) != Admission::kCompromised) {
        return Fail(in, vm.vm_id + " compromised but admitted normally");
      }
      seen_compromised.push_back(vm.vm_id);
      continue;
    }
    if (!r.assignment.contains(vm.vm_id)) return Fail(in, vm.vm_id + " neither placed nor compromised");
    const std::string& host = r.assignment.at(vm.vm_id);
    Slot& s = slots.at(host);
    if (!eligible(s)) return Fail(in, vm.vm_id + " admitted without free pcpu");
    const std::optional<std::string>& orig = vm.original_host;
    const bool orig_live = orig && slots.contains(*orig);
    switch (r.admission.at(vm.vm_id)) {
      case Admission::kDominating:
        if (!Dominates(s.residual, vm.ruv)) return Fail(in, vm.vm_id + " pass-1 host does not dominate");
        if (orig_live && eligible(slots.at(*orig)) && Dominates(slots.at(*orig).residual, vm.ruv) &&
            host != *orig) {
          return Fail(in, vm.vm_id + " left an admitting original host");
        }
        break;
      case Admission::kExactFit:
        if (any_dom) return Fail(in, vm.vm_id + " took pass 2 while pass 1 had a host");
        if (!ExactlyFits(s.residual, vm.ruv)) return Fail(in, vm.vm_id + " pass-2 host not equal");
        if (orig_live && eligible(slots.at(*orig)) && ExactlyFits(slots.at(*orig).residual, vm.ruv) &&
            host != *orig) {
          return Fail(in, vm.vm_id + " left an exactly fitting original host");
        }
        break;
      case Admission::kCompromised:
        return Fail(in, vm.vm_id + " flagged compromised but not listed");
    }
    const LevelTriple d = vm.ruv.ordinals();
    for (std::size_t j = 0; j < 3; ++j) {
      s.residual[j] = std::max(0, s.residual[j] - d[j]);
      s.admitted_demand[j] += d[j];
    }
    s.pcpu_free -= vm.vcpu;
  }
  if (seen_compromised != r.compromised) return Fail(in, "compromised list not in pool order");
  for (const auto& [id, s] : slots) {
    for (int v : s.admitted_demand) {
      if (v > kMaxLevel) return Fail(in, "admitted demand exceeds capacity on " + id);
    }
  }
  return {};
}

namespace {

std::string Determinism(std::mt19937& rng) {
  Instance in = RandomInstance(rng);
  for (Procedure p : {Procedure::kBasic, Procedure::kVcpuConstrained}) {
    const PlacementResult a = Place(p, in.vms, in.hosts, in.options);
    const PlacementResult b = Place(p, in.vms, in.hosts, in.options);
    if (!(a == b)) return Fail(in, "two runs differ");
    Instance shuffled = in;
    std::shuffle(shuffled.vms.begin(), shuffled.vms.end(), rng);
    std::shuffle(shuffled.hosts.begin(), shuffled.hosts.end(), rng);
    if (!(Place(p, shuffled.vms, shuffled.hosts, in.options) == a)) {
      return Fail(in, "input order changed the result");
    }
  }
  return {};
}

std::string VcpuBudget(std::mt19937& rng) {
  const Instance in = RandomInstance(rng);
  const PlacementResult r = PlaceVupicVcpu(in.vms, in.hosts, in.options);
  std::map<std::string, int> used;
  std::map<std::string, int> budget;
  for (const HostDescriptor& h : in.hosts) {
    budget[h.host_id] = Budget(h, Procedure::kVcpuConstrained, in.options);
    used[h.host_id] = 0;
  }
  std::map<std::string, int> vcpu;
  for (const VmDescriptor& vm : in.vms) vcpu[vm.vm_id] = vm.vcpu;
  for (const auto& [vm, host] : r.assignment) used.at(host) += vcpu.at(vm);
  for (const auto& [host, u] : used) {
    // Residents only ever accumulate, so the final sum bounds every step.
    if (u > budget.at(host)) return Fail(in, "vcpu over budget on " + host);
    if (r.FindHost(host)->pcpu_free != budget.at(host) - u) return Fail(in, "pcpu_free mismatch");
  }
  const std::set<std::string> compromised(r.compromised.begin(), r.compromised.end());
  for (const std::string& id : r.unfit) {
    if (r.assignment.contains(id)) return Fail(in, id + " both placed and unfit");
    if (!compromised.contains(id)) return Fail(in, id + " unfit without being compromised");
    for (const auto& [host, u] : used) {
      if (budget.at(host) - u >= vcpu.at(id)) return Fail(in, id + " unfit although " + host + " fits");
    }
  }
  if (r.assignment.size() + r.unfit.size() != in.vms.size()) return Fail(in, "VM lost");
  return {};
}

std::string CloneSymmetry(std::mt19937& rng) {
  // Few distinct shapes so that clone classes are common; 5 VMs keeps the
  // brute force over relabelings small.
  Instance in;
  const int hosts = Pick(rng, 1, 3);
  for (int i = 0; i < hosts; ++i) in.hosts.push_back({HostName(i), Pick(rng, 1, 4)});
  std::vector<VmDescriptor> shapes;
  for (int i = 0; i < 2; ++i) {
    std::optional<std::string> orig;
    if (Pick(rng, 0, 1)) orig = HostName(Pick(rng, 0, hosts - 1));
    shapes.push_back({"", RandomRuv(rng), Pick(rng, 1, 2), orig});
  }
  for (int i = 0; i < 5; ++i) {
    VmDescriptor vm = shapes[Pick(rng, 0, 1)];
    vm.vm_id = "v" + std::to_string(i);
    in.vms.push_back(vm);
  }
  for (Procedure p : {Procedure::kBasic, Procedure::kVcpuConstrained}) {
    const PlacementResult base = Place(p, in.vms, in.hosts, in.options);
    std::vector<std::string> ids;
    for (const VmDescriptor& vm : in.vms) ids.push_back(vm.vm_id);
    std::vector<std::string> perm = ids;
    do {
      // Only relabelings that map every VM onto a clone of itself.
      std::vector<VmDescriptor> relabeled = in.vms;
      bool within = true;
      for (std::size_t i = 0; i < relabeled.size() && within; ++i) {
        const auto& target = *std::find_if(in.vms.begin(), in.vms.end(),
                                           [&](const VmDescriptor& v) { return v.vm_id == perm[i]; });
        within = target.ruv == relabeled[i].ruv && target.vcpu == relabeled[i].vcpu &&
                 target.original_host == relabeled[i].original_host;
        relabeled[i].vm_id = perm[i];
      }
      if (!within) continue;
      std::shuffle(relabeled.begin(), relabeled.end(), rng);
      const PlacementResult r = Place(p, relabeled, in.hosts, in.options);
      if (r.assignment != base.assignment || r.compromised != base.compromised ||
          r.unfit != base.unfit) {
        return Fail(in, "relabeling clones changed the assignment");
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return {};
}

std::string PassOrdering(std::mt19937& rng) {
  const Instance in = RandomInstance(rng);
  if (std::string f = CheckMainLoop(in, Procedure::kBasic); !f.empty()) return f;
  return CheckMainLoop(in, Procedure::kVcpuConstrained);
}

std::string VacuousPcpu(std::mt19937& rng) {
  Instance in = RandomInstance(rng);
  const int n = static_cast<int>(in.vms.size());
  for (VmDescriptor& vm : in.vms) vm.vcpu = 1;
  for (HostDescriptor& h : in.hosts) h.pcpu = std::max(1, n) + Pick(rng, 0, 3);
  const PlacementResult p1 = PlaceVupic(in.vms, in.hosts, in.options);
  const PlacementResult p2 = PlaceVupicVcpu(in.vms, in.hosts, in.options);
  if (p1.assignment != p2.assignment || p1.compromised != p2.compromised || !p2.unfit.empty()) {
    return Fail(in, "p2 differs from p1 with vacuous pcpu");
  }
  return {};
}

std::string SubtractRange(std::mt19937& rng) {
  const LevelTriple state{Pick(rng, 0, 2), Pick(rng, 0, 2), Pick(rng, 0, 2)};
  const ResourceUsageVector ruv = RandomRuv(rng);
  const LevelTriple d = SubtractSaturating(state, ruv);
  const LevelTriple o = ruv.ordinals();
  for (std::size_t j = 0; j < 3; ++j) {
    if (d[j] < 0 || d[j] > kMaxLevel || d[j] > state[j] || d[j] != std::max(0, state[j] - o[j])) {
      return "subtract out of range for " + ruv.ToString();
    }
  }
  return {};
}

std::string ClassifyMonotone(std::mt19937& rng) {
  const LevelThresholds t;
  std::uniform_real_distribution<double> cpu(0, 150);
  std::uniform_real_distribution<double> rate(0, 2'000'000);
  std::uniform_real_distribution<double> up(1, 4);
  const ResourceAggregate lo{cpu(rng), rate(rng), rate(rng)};
  const ResourceAggregate hi{lo.cpu_pct * up(rng), lo.net_bps * up(rng), lo.disk_bps * up(rng)};
  const LevelTriple a = ClassifyRuv(lo, t).ordinals();
  const LevelTriple b = ClassifyRuv(hi, t).ordinals();
  for (std::size_t j = 0; j < 3; ++j) {
    if (a[j] > b[j]) return "classification decreased when usage grew";
  }
  return {};
}

}  // namespace

Instance RandomInstance(std::mt19937& rng) {
  Instance in;
  const int hosts = Pick(rng, 1, 5);
  for (int i = 0; i < hosts; ++i) in.hosts.push_back({HostName(i), Pick(rng, 1, 6)});
  const int vms = Pick(rng, 0, 12);
  for (int i = 0; i < vms; ++i) {
    std::optional<std::string> orig;
    // hosts + 1 names a host that no longer exists.
    if (const int o = Pick(rng, -1, hosts); o >= 0) orig = HostName(o);
    in.vms.push_back({"vm" + std::to_string(i), RandomRuv(rng), Pick(rng, 1, 3), orig});
  }
  in.options.compromised_order = Pick(rng, 0, 1) ? CompromisedOrder::kLifo : CompromisedOrder::kFifo;
  in.options.compromised_strategy =
      Pick(rng, 0, 1) ? CompromisedStrategy::kLeastDeficit : CompromisedStrategy::kFrontHost;
  in.options.vcpu_tie_break = Pick(rng, 0, 1) ? VcpuTieBreak::kAscending : VcpuTieBreak::kDescending;
  in.options.overcommit = std::vector<double>{1.0, 1.0, 1.5, 2.0}[Pick(rng, 0, 3)];
  return in;
}

std::string Describe(const Instance& in) {
  std::ostringstream out;
  out << "hosts:";
  for (const HostDescriptor& h : in.hosts) out << " " << h.host_id << "/" << h.pcpu;
  out << "\nvms:";
  for (const VmDescriptor& vm : in.vms) {
    out << " " << vm.vm_id << vm.ruv.ToString() << "x" << vm.vcpu << "@"
        << vm.original_host.value_or("-");
  }
  out << "\noptions: order=" << static_cast<int>(in.options.compromised_order)
      << " strategy=" << static_cast<int>(in.options.compromised_strategy)
      << " tie=" << static_cast<int>(in.options.vcpu_tie_break)
      << " overcommit=" << in.options.overcommit;
  return out.str();
}

std::vector<Property> AllProperties() {
  return {{"determinism", Determinism},
          {"vcpu_budget", VcpuBudget},
          {"clone_symmetry", CloneSymmetry},
          {"pass_ordering", PassOrdering},
          {"vacuous_pcpu", VacuousPcpu},
          {"subtract_range", SubtractRange},
          {"classify_monotone", ClassifyMonotone}};
}

SuiteOutcome RunPropertySuite(int cases_per_property, std::uint32_t seed) {
  SuiteOutcome outcome;
  for (const Property& p : AllProperties()) {
    std::mt19937 rng(seed);
    for (int i = 0; i < cases_per_property; ++i) {
      ++outcome.cases;
      if (std::string f = p.check(rng); !f.empty()) {
        outcome.failures.push_back(p.name + " case " + std::to_string(i) + ": " + f);
        break;
      }
    }
  }
  return outcome;
}

}  // namespace vupic::testing
