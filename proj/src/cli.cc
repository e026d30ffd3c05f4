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

#include "vupic/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "vupic/error.h"

namespace vupic::cli {

namespace {

std::string Fixed6(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", RoundForOutput(value));
  return buf;
}

std::string JoinIds(const std::vector<std::string>& ids) {
  std::string out;
  for (const std::string& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

std::vector<fs::path> ListLogFiles(const fs::path& logs) {
  std::error_code ec;
  if (fs::is_regular_file(logs, ec)) return {logs};
  if (!fs::is_directory(logs, ec)) throw ValidationError(logs.string() + ": no such file or directory");
  std::vector<fs::path> files;
  for (const fs::directory_entry& entry : fs::directory_iterator(logs)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().filename().string().starts_with(".")) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::map<std::string, int> LoadVmSpec(const fs::path& path) {
  const Json doc = ReadJsonFile(path);
  if (!doc.is_object()) throw ValidationError(path.string() + ": expected an object keyed by vm id");
  std::map<std::string, int> vcpus;
  for (const auto& [vm_id, entry] : doc.items()) {
    const Json& v = entry.is_object() && entry.contains("vcpu") ? entry.at("vcpu") : entry;
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ValidationError(path.string() + ": " + vm_id + ".vcpu must be a positive integer");
    }
    vcpus.emplace(vm_id, v.get<int>());
  }
  return vcpus;
}

LevelThresholds LoadThresholds(const std::optional<fs::path>& path) {
  if (!path) return {};
  try {
    return ThresholdsFromJson(ReadJsonFile(*path));
  } catch (const ValidationError& e) {
    const std::string what = e.what();
    if (what.starts_with(path->string())) throw;
    throw ValidationError(path->string() + ": " + what);
  }
}

Json ConfigEcho(Procedure procedure, const PlacementOptions& options) {
  return Json{{"procedure", ToString(procedure)},
              {"compromised", ToString(options.compromised_strategy)},
              {"order", ToString(options.compromised_order)},
              {"vcpu_tie_break", ToString(options.vcpu_tie_break)},
              {"overcommit", RoundForOutput(options.overcommit)}};
}

std::map<std::string, std::string> WithoutUnplaced(const CurrentPlacement& current) {
  std::map<std::string, std::string> placed;
  for (const auto& [vm_id, host] : current) {
    if (host) placed.emplace(vm_id, *host);
  }
  return placed;
}

template <typename Enum>
Enum ParseChoice(const std::string& text, std::initializer_list<std::pair<const char*, Enum>> choices,
                 const char* what) {
  for (const auto& [name, value] : choices) {
    if (text == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : choices) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  throw ValidationError(std::string("unknown ") + what + " \"" + text + "\" (expected " + allowed + ")");
}

}  // namespace

Procedure ParseProcedure(const std::string& text) {
  return ParseChoice<Procedure>(
      text, {{"p1", Procedure::kBasic}, {"p2", Procedure::kVcpuConstrained}}, "procedure");
}

CompromisedStrategy ParseCompromisedStrategy(const std::string& text) {
  return ParseChoice<CompromisedStrategy>(text,
                                          {{"front", CompromisedStrategy::kFrontHost},
                                           {"least-deficit", CompromisedStrategy::kLeastDeficit}},
                                          "compromised strategy");
}

CompromisedOrder ParseCompromisedOrder(const std::string& text) {
  return ParseChoice<CompromisedOrder>(
      text, {{"fifo", CompromisedOrder::kFifo}, {"lifo", CompromisedOrder::kLifo}},
      "compromised order");
}

VcpuTieBreak ParseVcpuTieBreak(const std::string& text) {
  return ParseChoice<VcpuTieBreak>(
      text, {{"desc", VcpuTieBreak::kDescending}, {"asc", VcpuTieBreak::kAscending}},
      "vcpu tie-break");
}

std::string ToString(Procedure procedure) {
  return procedure == Procedure::kBasic ? "p1" : "p2";
}
std::string ToString(CompromisedStrategy strategy) {
  return strategy == CompromisedStrategy::kFrontHost ? "front" : "least-deficit";
}
std::string ToString(CompromisedOrder order) {
  return order == CompromisedOrder::kFifo ? "fifo" : "lifo";
}
std::string ToString(VcpuTieBreak tie_break) {
  return tie_break == VcpuTieBreak::kDescending ? "desc" : "asc";
}

RunConfig LoadRunConfig(const fs::path& path) {
  const Json doc = ReadJsonFile(path);
  if (!doc.is_object()) throw ValidationError(path.string() + ": expected a JSON object");
  RunConfig cfg;
  try {
    if (doc.contains("thresholds")) {
      fs::path t = doc.at("thresholds").get<std::string>();
      cfg.thresholds = t.is_relative() ? path.parent_path() / t : t;
    }
    if (doc.contains("stat")) cfg.statistic = doc.at("stat").get<std::string>();
    if (doc.contains("window")) cfg.window_seconds = doc.at("window").get<std::int64_t>();
    if (doc.contains("procedure")) cfg.procedure = ParseProcedure(doc.at("procedure").get<std::string>());
    if (doc.contains("compromised")) {
      cfg.compromised_strategy = ParseCompromisedStrategy(doc.at("compromised").get<std::string>());
    }
    if (doc.contains("order")) cfg.compromised_order = ParseCompromisedOrder(doc.at("order").get<std::string>());
    if (doc.contains("vcpu_tie_break")) {
      cfg.vcpu_tie_break = ParseVcpuTieBreak(doc.at("vcpu_tie_break").get<std::string>());
    }
    if (doc.contains("overcommit")) cfg.overcommit = doc.at("overcommit").get<double>();
    if (doc.contains("capacity")) cfg.capacity = doc.at("capacity").get<LevelTriple>();
  } catch (const Json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return cfg;
}

RuvTable RunClassify(const ClassifyArgs& args, std::ostream& out) {
  const LevelThresholds thresholds = LoadThresholds(args.thresholds);
  args.aggregation.Validate();

  const std::vector<fs::path> files = ListLogFiles(args.logs);
  if (files.empty()) throw ValidationError(args.logs.string() + ": no input");

  std::vector<UsageSample> samples;
  for (const fs::path& file : files) {
    std::ifstream in(file);
    if (!in) throw ValidationError(file.string() + ": cannot open for reading");
    try {
      std::vector<UsageSample> parsed = ParseUsageLog(in);
      samples.insert(samples.end(), std::make_move_iterator(parsed.begin()),
                     std::make_move_iterator(parsed.end()));
    } catch (const ValidationError& e) {
      throw ValidationError(file.string() + ": " + e.what());
    }
  }
  if (samples.empty()) throw ValidationError(args.logs.string() + ": no input");

  const std::map<std::string, ResourceUsageVector> ruvs =
      ClassifyVms(GroupByVm(samples), args.aggregation, thresholds);
  const std::map<std::string, int> vcpus =
      args.vm_spec ? LoadVmSpec(*args.vm_spec) : std::map<std::string, int>{};

  RuvTable table;
  for (const auto& [vm_id, ruv] : ruvs) {
    auto it = vcpus.find(vm_id);
    table.emplace(vm_id, RuvRecord{ruv, it == vcpus.end() ? 1 : it->second});
  }
  WriteJsonFile(args.output, RuvTableToJson(table));

  out << std::left << std::setw(12) << "VM" << "RUV      VCPU\n";
  for (const auto& [vm_id, rec] : table) {
    out << std::left << std::setw(12) << vm_id << std::setw(9) << rec.ruv.ToString() << rec.vcpu
        << '\n';
  }
  return table;
}

ScheduleDocument RunPlace(const PlaceArgs& args, std::ostream& out) {
  const RuvTable table = RuvTableFromJson(ReadJsonFile(args.ruvs));
  const std::vector<HostDescriptor> hosts =
      HostsFromJson(ReadJsonFile(args.hosts), args.procedure == Procedure::kVcpuConstrained);
  CurrentPlacement current;
  if (args.current) current = CurrentFromJson(ReadJsonFile(*args.current));
  for (const auto& [vm_id, host] : current) {
    if (!table.contains(vm_id)) {
      throw ValidationError("vm " + vm_id + " in " + args.current->string() + " has no RUV in " +
                            args.ruvs.string());
    }
  }

  std::vector<VmDescriptor> vms;
  CurrentPlacement originals;
  for (const auto& [vm_id, rec] : table) {
    VmDescriptor vm{vm_id, rec.ruv, rec.vcpu, std::nullopt};
    if (auto it = current.find(vm_id); it != current.end()) vm.original_host = it->second;
    originals.emplace(vm_id, vm.original_host);
    vms.push_back(std::move(vm));
  }

  const PlacementResult result = Place(args.procedure, vms, hosts, args.options);
  const MigrationSchedule schedule = DiffMigrations(result, originals);
  const Json doc = ScheduleToJson(result, schedule, ConfigEcho(args.procedure, args.options));
  WriteJsonFile(args.output, doc);

  const std::set<std::string> compromised(result.compromised.begin(), result.compromised.end());
  out << std::left << std::setw(12) << "VM" << std::setw(14) << "FROM" << std::setw(14) << "TO"
      << "NOTE\n";
  for (const VmDescriptor& vm : vms) {
    const auto placed = result.assignment.find(vm.vm_id);
    const std::string to = placed == result.assignment.end() ? "INVALID/UNFIT" : placed->second;
    std::string note;
    if (placed != result.assignment.end()) note = vm.original_host == placed->second ? "stay" : "move";
    if (compromised.contains(vm.vm_id)) note += note.empty() ? "compromised" : ", compromised";
    out << std::left << std::setw(12) << vm.vm_id << std::setw(14)
        << vm.original_host.value_or("-") << std::setw(14) << to << note << '\n';
  }
  out << "migrations: " << schedule.moves.size() << ", stay: " << schedule.stay_count
      << ", compromised: " << result.compromised.size() << ", unfit: " << result.unfit.size()
      << '\n';
  return ScheduleFromJson(doc);
}

std::map<std::string, VmScore> RunSimulate(const SimulateArgs& args, std::ostream& out) {
  const ScheduleDocument schedule = ScheduleFromJson(ReadJsonFile(args.schedule));
  const RuvMap ruvs = RuvsOf(RuvTableFromJson(ReadJsonFile(args.ruvs)));

  const std::map<std::string, VmScore> after = ScorePlacement(schedule.assignment, ruvs, args.model);
  std::optional<std::map<std::string, VmScore>> before;
  if (args.baseline) {
    before = ScorePlacement(WithoutUnplaced(CurrentFromJson(ReadJsonFile(*args.baseline))), ruvs,
                            args.model);
  }

  std::optional<std::string> csv;
  if (before) {
    std::set<std::string> vm_ids;
    for (const auto& [vm_id, s] : after) vm_ids.insert(vm_id);
    for (const auto& [vm_id, s] : *before) vm_ids.insert(vm_id);
    std::string text = "vm_id,host,score_before,score_after\n";
    for (const std::string& vm_id : vm_ids) {
      auto b = before->find(vm_id);
      auto a = after.find(vm_id);
      text += vm_id + "," + (a == after.end() ? "" : a->second.host_id) + "," +
              (b == before->end() ? "" : Fixed6(b->second.score)) + "," +
              (a == after.end() ? "" : Fixed6(a->second.score)) + "\n";
    }
    csv = std::move(text);
  }

  WriteJsonFile(args.output, ScoresToJson(after));
  if (before && args.baseline_output) WriteJsonFile(*args.baseline_output, ScoresToJson(*before));
  if (csv) {
    fs::path csv_path = args.csv.value_or(fs::path(args.output).replace_extension(".csv"));
    WriteFileAtomic(csv_path, *csv);
  }

  out << std::left << std::setw(12) << "VM" << std::setw(14) << "HOST";
  if (before) out << std::setw(10) << "BEFORE";
  out << "SCORE\n";
  for (const auto& [vm_id, s] : after) {
    out << std::left << std::setw(12) << vm_id << std::setw(14) << s.host_id;
    if (before) {
      auto b = before->find(vm_id);
      out << std::setw(10) << (b == before->end() ? "-" : Fixed6(b->second.score));
    }
    out << Fixed6(s.score) << '\n';
  }
  return after;
}

void RunReport(const ReportArgs& args, std::ostream& out) {
  const std::map<std::string, VmScore> before = ScoresFromJson(ReadJsonFile(args.before));
  const std::map<std::string, VmScore> after = ScoresFromJson(ReadJsonFile(args.after));
  const ScheduleDocument schedule = ScheduleFromJson(ReadJsonFile(args.schedule));

  std::vector<std::string> only_before;
  std::vector<std::string> only_after;
  for (const auto& [vm_id, s] : before) {
    if (!after.contains(vm_id)) only_before.push_back(vm_id);
  }
  for (const auto& [vm_id, s] : after) {
    if (!before.contains(vm_id)) only_after.push_back(vm_id);
  }
  if (!only_before.empty() || !only_after.empty()) {
    throw ValidationError("before/after VM sets differ; only in before: [" + JoinIds(only_before) +
                          "], only in after: [" + JoinIds(only_after) + "]");
  }

  const std::set<std::string> compromised(schedule.compromised.begin(), schedule.compromised.end());
  std::set<std::string> migrated;
  for (const Migration& m : schedule.migrations) migrated.insert(m.vm_id);

  constexpr double kEpsilon = 1e-9;
  int improved = 0;
  int degraded = 0;
  int unchanged = 0;
  std::string csv = "vm_id,host,score_before,score_after,delta,compromised,migrated\n";
  std::ostringstream table;
  table << std::left << std::setw(13) << "VM" << std::setw(14) << "HOST" << std::setw(10)
        << "BEFORE" << std::setw(10) << "AFTER" << "DELTA\n";
  for (const auto& [vm_id, a] : after) {
    const double b = before.at(vm_id).score;
    const double delta = RoundForOutput(a.score - b);
    if (delta > kEpsilon) {
      ++improved;
    } else if (delta < -kEpsilon) {
      ++degraded;
    } else {
      ++unchanged;
    }
    const bool is_compromised = compromised.contains(vm_id);
    const bool is_migrated = migrated.contains(vm_id);
    csv += vm_id + "," + a.host_id + "," + Fixed6(b) + "," + Fixed6(a.score) + "," + Fixed6(delta) +
           "," + (is_compromised ? "true" : "false") + "," + (is_migrated ? "true" : "false") + "\n";
    table << std::left << std::setw(13) << (vm_id + (is_compromised ? "*" : "")) << std::setw(14)
          << a.host_id << std::setw(10) << Fixed6(b) << std::setw(10) << Fixed6(a.score)
          << (delta > 0 ? "+" : "") << Fixed6(delta) << '\n';
  }
  WriteFileAtomic(args.output, csv);

  out << table.str();
  if (!compromised.empty()) out << "(* = compromised placement)\n";
  out << "improved: " << improved << ", degraded: " << degraded << ", unchanged: " << unchanged
      << '\n';
  out << "migrations: " << schedule.migrations.size() << ", stay_count: " << schedule.stay_count
      << '\n';
}

int Main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Contention-aware VM placement (VUPIC)", "vupic"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON defaults file (else $VUPIC_CONFIG)");

  ClassifyArgs classify;
  std::string thresholds_path;
  std::string vm_spec_path;
  std::string stat;
  std::int64_t window = 0;
  std::int64_t window_end = 0;
  auto* c = app.add_subcommand("classify", "Classify usage logs into RUVs");
  c->add_option("--logs", classify.logs, "Log directory or file")->required();
  auto* c_thr = c->add_option("--thresholds", thresholds_path, "Threshold JSON file");
  auto* c_vms = c->add_option("--vms", vm_spec_path, "VM spec JSON (vcpu per VM)");
  auto* c_stat = c->add_option("--stat", stat, "mean | max | pNN");
  auto* c_win = c->add_option("--window", window, "Window length in seconds");
  auto* c_end = c->add_option("--window-end", window_end, "Window right edge (unix seconds)");
  c->add_option("-o,--output", classify.output, "Output ruvs.json");

  PlaceArgs place;
  std::string procedure;
  std::string strategy;
  std::string order;
  std::string tie_break;
  double overcommit = 1.0;
  std::string current_path;
  auto* p = app.add_subcommand("place", "Compute a placement and migration schedule");
  p->add_option("--ruvs", place.ruvs, "ruvs.json")->required();
  p->add_option("--hosts", place.hosts, "hosts.json")->required();
  auto* p_cur = p->add_option("--current", current_path, "current.json");
  auto* p_proc = p->add_option("--procedure", procedure, "p1 | p2");
  auto* p_strat = p->add_option("--compromised", strategy, "front | least-deficit");
  auto* p_order = p->add_option("--order", order, "Compromised queue order: fifo | lifo");
  auto* p_tie = p->add_option("--vcpu-tie-break", tie_break, "desc | asc");
  auto* p_over = p->add_option("--overcommit", overcommit, "PCPU budget multiplier (p2)");
  p->add_option("-o,--output", place.output, "Output schedule.json");

  SimulateArgs simulate;
  std::string baseline_path;
  std::string csv_path;
  std::string baseline_out;
  std::vector<int> capacity;
  auto* s = app.add_subcommand("simulate", "Score a placement with the contention model");
  s->add_option("--schedule", simulate.schedule, "schedule.json")->required();
  s->add_option("--ruvs", simulate.ruvs, "ruvs.json")->required();
  auto* s_base = s->add_option("--baseline", baseline_path, "current.json to compare against");
  auto* s_csv = s->add_option("--csv", csv_path, "Before/after CSV path");
  auto* s_bout = s->add_option("--baseline-out", baseline_out, "Write baseline scores here");
  auto* s_cap = s->add_option("--capacity", capacity, "Per-host capacity cpu net disk")->expected(3);
  s->add_option("-o,--output", simulate.output, "Output scores.json");

  ReportArgs report;
  auto* r = app.add_subcommand("report", "Compare before/after scores");
  r->add_option("--before", report.before, "Baseline scores.json")->required();
  r->add_option("--after", report.after, "New scores.json")->required();
  r->add_option("--schedule", report.schedule, "schedule.json")->required();
  r->add_option("-o,--output", report.output, "Output report.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    RunConfig cfg;
    if (config_path.empty()) {
      if (const char* env = std::getenv("VUPIC_CONFIG"); env != nullptr && *env != '\0') {
        config_path = env;
      }
    }
    if (!config_path.empty()) cfg = LoadRunConfig(config_path);

    if (c->parsed()) {
      classify.thresholds = c_thr->count() ? std::optional<fs::path>(thresholds_path) : cfg.thresholds;
      if (c_vms->count()) classify.vm_spec = vm_spec_path;
      if (c_stat->count()) {
        SetStatisticFromString(stat, classify.aggregation);
      } else if (cfg.statistic) {
        SetStatisticFromString(*cfg.statistic, classify.aggregation);
      }
      if (c_win->count()) {
        classify.aggregation.window_seconds = window;
      } else if (cfg.window_seconds) {
        classify.aggregation.window_seconds = *cfg.window_seconds;
      }
      if (c_end->count()) classify.aggregation.window_end = window_end;
      RunClassify(classify, out);
    } else if (p->parsed()) {
      if (p_cur->count()) place.current = current_path;
      place.procedure = p_proc->count() ? ParseProcedure(procedure)
                                        : cfg.procedure.value_or(Procedure::kBasic);
      place.options.compromised_strategy =
          p_strat->count() ? ParseCompromisedStrategy(strategy)
                           : cfg.compromised_strategy.value_or(CompromisedStrategy::kFrontHost);
      place.options.compromised_order = p_order->count()
                                            ? ParseCompromisedOrder(order)
                                            : cfg.compromised_order.value_or(CompromisedOrder::kFifo);
      place.options.vcpu_tie_break = p_tie->count()
                                         ? ParseVcpuTieBreak(tie_break)
                                         : cfg.vcpu_tie_break.value_or(VcpuTieBreak::kDescending);
      place.options.overcommit = p_over->count() ? overcommit : cfg.overcommit.value_or(1.0);
      RunPlace(place, out);
    } else if (s->parsed()) {
      if (s_base->count()) simulate.baseline = baseline_path;
      if (s_csv->count()) simulate.csv = csv_path;
      if (s_bout->count()) simulate.baseline_output = baseline_out;
      if (s_cap->count()) {
        simulate.model.capacity = {capacity[0], capacity[1], capacity[2]};
      } else if (cfg.capacity) {
        simulate.model.capacity = *cfg.capacity;
      }
      RunSimulate(simulate, out);
    } else if (r->parsed()) {
      RunReport(report, out);
    }
  } catch (const std::exception& e) {
    err << "vupic: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace vupic::cli
