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

#include "vupic/formats.h"

#include <cmath>
#include <fstream>
#include <system_error>

#include "vupic/error.h"

namespace vupic {

namespace fs = std::filesystem;

namespace {

const Json& Require(const Json& obj, const std::string& key, const std::string& context) {
  if (!obj.is_object()) throw ValidationError(context + ": expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(context + ": missing key \"" + key + "\"");
  return *it;
}

double RequireNumber(const Json& obj, const std::string& key, const std::string& context) {
  const Json& v = Require(obj, key, context);
  if (!v.is_number()) throw ValidationError(context + "." + key + ": expected a number");
  return v.get<double>();
}

int RequirePositiveInt(const Json& v, const std::string& context) {
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ValidationError(context + ": expected a positive integer");
  }
  return v.get<int>();
}

std::string RequireString(const Json& v, const std::string& context) {
  if (!v.is_string() || v.get_ref<const std::string&>().empty()) {
    throw ValidationError(context + ": expected a non-empty string");
  }
  return v.get<std::string>();
}

UsageLevel LevelField(const Json& obj, const char* key, const std::string& context) {
  const Json& v = Require(obj, key, context);
  if (!v.is_string()) throw ValidationError(context + "." + key + ": expected \"L\", \"M\" or \"H\"");
  try {
    return LevelFromSymbol(v.get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(context + "." + key + ": " + e.what());
  }
}

std::vector<std::string> StringList(const Json& v, const std::string& context) {
  if (!v.is_array()) throw ValidationError(context + ": expected an array");
  std::vector<std::string> out;
  for (const Json& item : v) out.push_back(RequireString(item, context));
  return out;
}

Json Nullable(const std::optional<std::string>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json FactorsToJson(const FactorTriple& f) {
  return Json{{"cpu", RoundForOutput(f[0])},
              {"net", RoundForOutput(f[1])},
              {"disk", RoundForOutput(f[2])}};
}

}  // namespace

double RoundForOutput(double value) {
  const double rounded = std::round(value * 1e6) / 1e6;
  return rounded == 0.0 ? 0.0 : rounded;  // no "-0.0"
}

std::string DumpCanonical(const Json& doc) { return doc.dump(2) + "\n"; }

Json ReadJsonFile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path.string() + ": malformed JSON: " + e.what());
  }
}

void WriteFileAtomic(const fs::path& path, const std::string& contents) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError(path.string() + ": cannot open for writing");
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw ValidationError(path.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw ValidationError(path.string() + ": rename failed: " + ec.message());
  }
}

void WriteJsonFile(const fs::path& path, const Json& doc) {
  WriteFileAtomic(path, DumpCanonical(doc));
}

LevelThresholds ThresholdsFromJson(const Json& doc) {
  LevelThresholds t;
  auto bounds = [&](const char* key) {
    const Json& r = Require(doc, key, "thresholds");
    const std::string ctx = std::string("thresholds.") + key;
    return LevelBounds{RequireNumber(r, "m_lower", ctx), RequireNumber(r, "h_lower", ctx)};
  };
  t.cpu = bounds("cpu");
  t.net = bounds("net");
  t.disk = bounds("disk");
  t.Validate();
  return t;
}

Json ThresholdsToJson(const LevelThresholds& t) {
  auto bounds = [](const LevelBounds& b) {
    return Json{{"m_lower", b.m_lower}, {"h_lower", b.h_lower}};
  };
  return Json{{"cpu", bounds(t.cpu)}, {"net", bounds(t.net)}, {"disk", bounds(t.disk)}};
}

RuvTable RuvTableFromJson(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("ruvs: expected an object keyed by vm id");
  RuvTable table;
  for (const auto& [vm_id, entry] : doc.items()) {
    const std::string ctx = "ruvs." + vm_id;
    RuvRecord rec;
    rec.ruv = {LevelField(entry, "cpu", ctx), LevelField(entry, "net", ctx),
               LevelField(entry, "disk", ctx)};
    if (auto it = entry.find("vcpu"); it != entry.end()) {
      rec.vcpu = RequirePositiveInt(*it, ctx + ".vcpu");
    }
    table.emplace(vm_id, rec);
  }
  return table;
}

Json RuvTableToJson(const RuvTable& table) {
  Json doc = Json::object();
  for (const auto& [vm_id, rec] : table) {
    doc[vm_id] = Json{{"cpu", std::string(1, ToSymbol(rec.ruv.cpu))},
                      {"net", std::string(1, ToSymbol(rec.ruv.net))},
                      {"disk", std::string(1, ToSymbol(rec.ruv.disk))},
                      {"vcpu", rec.vcpu}};
  }
  return doc;
}

RuvMap RuvsOf(const RuvTable& table) {
  RuvMap ruvs;
  for (const auto& [vm_id, rec] : table) ruvs.emplace(vm_id, rec.ruv);
  return ruvs;
}

std::vector<HostDescriptor> HostsFromJson(const Json& doc, bool require_pcpu) {
  if (!doc.is_array()) throw ValidationError("hosts: expected an array");
  std::vector<HostDescriptor> hosts;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string ctx = "hosts[" + std::to_string(i) + "]";
    HostDescriptor h;
    h.host_id = RequireString(Require(doc[i], "host_id", ctx), ctx + ".host_id");
    if (auto it = doc[i].find("pcpu"); it != doc[i].end()) {
      h.pcpu = RequirePositiveInt(*it, ctx + ".pcpu");
    } else if (require_pcpu) {
      throw ValidationError(ctx + ": missing key \"pcpu\" (required by the vcpu-constrained procedure)");
    }
    hosts.push_back(std::move(h));
  }
  return hosts;
}

CurrentPlacement CurrentFromJson(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("current: expected an object keyed by vm id");
  CurrentPlacement current;
  for (const auto& [vm_id, host] : doc.items()) {
    if (host.is_null()) {
      current.emplace(vm_id, std::nullopt);
    } else {
      current.emplace(vm_id, RequireString(host, "current." + vm_id));
    }
  }
  return current;
}

Json ScheduleToJson(const PlacementResult& result, const MigrationSchedule& schedule,
                    const Json& config) {
  Json migrations = Json::array();
  for (const Migration& m : schedule.moves) {
    migrations.push_back(Json{{"vm", m.vm_id}, {"from", Nullable(m.from)}, {"to", m.to}});
  }
  Json hosts = Json::object();
  for (const HostState& h : result.host_states) {
    hosts[h.host_id] = Json{{"residual", h.residual},
                            {"demand", h.demand},
                            {"pcpu_free", h.pcpu_free},
                            {"resident", h.resident}};
  }
  return Json{{"assignment", result.assignment},
              {"compromised", result.compromised},
              {"unfit", result.unfit},
              {"migrations", std::move(migrations)},
              {"stay_count", schedule.stay_count},
              {"hosts", std::move(hosts)},
              {"config", config}};
}

ScheduleDocument ScheduleFromJson(const Json& doc) {
  ScheduleDocument s;
  const Json& assignment = Require(doc, "assignment", "schedule");
  if (!assignment.is_object()) throw ValidationError("schedule.assignment: expected an object");
  for (const auto& [vm_id, host] : assignment.items()) {
    s.assignment.emplace(vm_id, RequireString(host, "schedule.assignment." + vm_id));
  }
  s.compromised = StringList(Require(doc, "compromised", "schedule"), "schedule.compromised");
  s.unfit = StringList(Require(doc, "unfit", "schedule"), "schedule.unfit");
  const Json& moves = Require(doc, "migrations", "schedule");
  if (!moves.is_array()) throw ValidationError("schedule.migrations: expected an array");
  for (const Json& m : moves) {
    Migration mig;
    mig.vm_id = RequireString(Require(m, "vm", "schedule.migrations"), "schedule.migrations.vm");
    const Json& from = Require(m, "from", "schedule.migrations");
    if (!from.is_null()) mig.from = RequireString(from, "schedule.migrations.from");
    mig.to = RequireString(Require(m, "to", "schedule.migrations"), "schedule.migrations.to");
    s.migrations.push_back(std::move(mig));
  }
  const Json& stay = Require(doc, "stay_count", "schedule");
  if (!stay.is_number_integer()) throw ValidationError("schedule.stay_count: expected an integer");
  s.stay_count = stay.get<int>();
  if (auto it = doc.find("config"); it != doc.end()) s.config = *it;
  return s;
}

Json ScoresToJson(const std::map<std::string, VmScore>& scores) {
  Json doc = Json::object();
  for (const auto& [vm_id, s] : scores) {
    doc[vm_id] = Json{{"host", s.host_id},
                      {"score", RoundForOutput(s.score)},
                      {"factors", FactorsToJson(s.factors)}};
  }
  return doc;
}

std::map<std::string, VmScore> ScoresFromJson(const Json& doc) {
  if (!doc.is_object()) throw ValidationError("scores: expected an object keyed by vm id");
  std::map<std::string, VmScore> scores;
  for (const auto& [vm_id, entry] : doc.items()) {
    const std::string ctx = "scores." + vm_id;
    VmScore s;
    s.vm_id = vm_id;
    if (auto it = entry.find("host"); it != entry.end() && it->is_string()) {
      s.host_id = it->get<std::string>();
    }
    s.score = RequireNumber(entry, "score", ctx);
    const Json& f = Require(entry, "factors", ctx);
    s.factors = {RequireNumber(f, "cpu", ctx + ".factors"), RequireNumber(f, "net", ctx + ".factors"),
                 RequireNumber(f, "disk", ctx + ".factors")};
    scores.emplace(vm_id, std::move(s));
  }
  return scores;
}

}  // namespace vupic
