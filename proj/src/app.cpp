// Copyright 2026 The UncAD Selection Authors
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

#include "uncad/app.hpp"

#include "uncad/errors.hpp"
#include "uncad/oracles.hpp"
#include "uncad/random.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace uncad::app
{
namespace
{

namespace fs = std::filesystem;

/// Shortest decimal form that parses back to the same double.
std::string exact(double v)
{
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

std::string fixed(double v, int decimals)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string metric_columns(const MetricsRow & r)
{
  std::string out;
  const auto add = [&out](double v) { out += "," + fixed(v, 6); };
  for (const double v : r.de) add(v);
  add(r.de_avg);
  for (const double v : r.cr) add(v);
  add(r.cr_avg);
  for (const double v : r.dacr) add(v);
  add(r.dacr_avg);
  return out;
}

constexpr std::string_view kMetricHeader =
  "de_1s,de_2s,de_3s,de_avg,cr_1s,cr_2s,cr_3s,cr_avg,dacr_1s,dacr_2s,dacr_3s,dacr_avg";

CandidateSet keep_most_confident(const CandidateSet & set)
{
  std::map<Command, std::vector<CandidateTrajectory>> out;
  for (const auto & [cmd, trajs] : set.per_command()) {
    const auto best = std::max_element(
      trajs.begin(), trajs.end(),
      [](const auto & a, const auto & b) { return a.confidence < b.confidence; });
    out[cmd] = {*best};
  }
  return CandidateSet(std::move(out));
}

std::string pad(std::string s, std::size_t width, bool left_align = false)
{
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left_align ? s + fill : fill + s;
}

std::string table_line(const std::string & label, const MetricsRow & r)
{
  std::string line = pad(label, 10, true) + " |";
  for (const double v : r.de) line += pad(fixed(v, 2), 6);
  line += pad(fixed(r.de_avg, 2), 6) + " |";
  for (const double v : r.cr) line += pad(fixed(100.0 * v, 2), 7);
  line += pad(fixed(100.0 * r.cr_avg, 2), 7) + " |";
  for (const double v : r.dacr) line += pad(fixed(100.0 * v, 2), 7);
  line += pad(fixed(100.0 * r.dacr_avg, 2), 7);
  return line + "\n";
}

std::string table_header(const std::string & first)
{
  std::string h = pad(first, 10, true) + " |" + pad("DE (m)", 24) + " |" + pad("CR (%)", 28) +
                  " |" + pad("DACR (%)", 28) + "\n";
  std::string h2 = pad("", 10) + " |";
  for (const char * c : {"1s", "2s", "3s", "Avg."}) h2 += pad(c, 6);
  h2 += " |";
  for (const char * c : {"1s", "2s", "3s", "Avg."}) h2 += pad(c, 7);
  h2 += " |";
  for (const char * c : {"1s", "2s", "3s", "Avg."}) h2 += pad(c, 7);
  return h + h2 + "\n" + std::string(h2.size(), '-') + "\n";
}

void ensure_dir(const fs::path & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
  }
}

}  // namespace

std::string_view to_string(Preset preset)
{
  switch (preset) {
    case Preset::Baseline: return "baseline";
    case Preset::UncOnly: return "unc-only";
    case Preset::Multimodal: return "multimodal";
    case Preset::Cas: return "cas";
    case Preset::Ucas: return "ucas";
  }
  return "unknown";
}

std::optional<Preset> preset_from_string(std::string_view name)
{
  for (const Preset p : kAllPresets) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

PresetSetup preset_setup(Preset preset, const SelectionConfig & base)
{
  PresetSetup setup;
  setup.selection = base;
  auto & s = setup.selection;
  switch (preset) {
    case Preset::Baseline:
      setup.single_candidate = true;
      setup.fixed_scale = true;
      s.enable_uncertainty_filter = s.enable_agent_filter = s.enable_boundary_filter = false;
      break;
    case Preset::UncOnly:
      setup.single_candidate = true;
      s.enable_uncertainty_filter = s.enable_agent_filter = s.enable_boundary_filter = false;
      break;
    case Preset::Multimodal:
      s.enable_uncertainty_filter = s.enable_agent_filter = s.enable_boundary_filter = false;
      break;
    case Preset::Cas:
      s.enable_uncertainty_filter = false;
      s.enable_agent_filter = s.enable_boundary_filter = true;
      break;
    case Preset::Ucas:
      s.enable_uncertainty_filter = s.enable_agent_filter = s.enable_boundary_filter = true;
      break;
  }
  return setup;
}

ScenarioResult evaluate_scenario(const Scenario & s, const RunConfig & cfg)
{
  const PresetSetup setup = preset_setup(cfg.preset, cfg.selection);
  const CandidateSet candidates =
    setup.single_candidate ? keep_most_confident(s.candidates) : s.candidates;
  const UncertainMap map = setup.fixed_scale ? with_uniform_scale(s.map, cfg.fixed_scale) : s.map;

  const SelectionReport report =
    ucas_select(candidates, s.command, map, s.agents, s.ego_dims, setup.selection);

  ScenarioResult out;
  out.id = s.id;
  out.scenario_class = s.scenario_class;
  out.row =
    evaluate_frame(report.chosen, s.ego_dims, ground_truth(s), s.scenario_class, cfg.convention);
  out.chosen_index = report.chosen_index;
  out.fallback_used = report.fallback_used;
  return out;
}

void verify_scenario(const Scenario & s, const RunConfig & cfg)
{
  const auto mismatch = [&s](const std::string & what) {
    throw OracleMismatch("scenario " + s.id + ": " + what);
  };
  const PresetSetup setup = preset_setup(cfg.preset, cfg.selection);
  const CandidateSet candidates =
    setup.single_candidate ? keep_most_confident(s.candidates) : s.candidates;
  const UncertainMap map = setup.fixed_scale ? with_uniform_scale(s.map, cfg.fixed_scale) : s.map;
  const auto & trajs = command_filter(candidates, s.command);

  for (std::size_t i = 0; i < trajs.size(); ++i) {
    for (const std::size_t h : kHorizonSteps) {
      if (oracle::near_edge(trajs[i], s.ego_dims, map.drivable_area(), h)) {
        continue;
      }
      const double fast = dacr_frame(trajs[i], s.ego_dims, map.drivable_area(), h);
      const double slow = oracle::oracle_dacr(trajs[i], s.ego_dims, map.drivable_area(), h);
      if (fast != slow) {
        mismatch(
          "DACR of candidate " + std::to_string(i) + " at " + std::to_string(h) + " steps: " +
          exact(fast) + " vs oracle " + exact(slow));
      }
    }
  }

  const SelectionReport report =
    ucas_select(candidates, s.command, map, s.agents, s.ego_dims, setup.selection);
  const std::vector<UncertainPolyline> risk_elements = setup.selection.risk_all_element_kinds
                                                         ? all_elements(map)
                                                         : boundary_elements(map);
  std::vector<oracle::OracleFlags> flags;
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    const auto & rec = report.candidates[i];
    if (!risk_elements.empty()) {
      const double ref =
        oracle::oracle_trajectory_risk(trajs[i], risk_elements, setup.selection.risk_aggregator);
      if (std::abs(ref - rec.risk_nll) > 1e-12 * std::max(1.0, std::abs(ref))) {
        mismatch(
          "risk of candidate " + std::to_string(i) + ": " + exact(rec.risk_nll) + " vs oracle " +
          exact(ref));
      }
    }
    flags.push_back({rec.risk_nll, rec.agent_collision, rec.boundary_collision});
  }
  const std::size_t ref_index = oracle::oracle_select(candidates, s.command, setup.selection, flags);
  if (ref_index != report.chosen_index) {
    mismatch(
      "selected candidate " + std::to_string(report.chosen_index) + " vs oracle " +
      std::to_string(ref_index));
  }
}

EvalResult run_eval(const RunConfig & cfg)
{
  validate_config(cfg.selection);
  const Manifest manifest = load_manifest(cfg.suite);
  const fs::path base = cfg.suite.parent_path();

  EvalResult result;
  result.master_seed = manifest.master_seed;
  std::vector<ManifestEntry> entries = manifest.entries;
  std::sort(entries.begin(), entries.end(), [](const auto & a, const auto & b) { return a.id < b.id; });
  if (entries.empty()) {
    throw ParseError(cfg.suite.string() + ": manifest lists no scenarios");
  }

  for (const auto & entry : entries) {
    const Scenario s = load_scenario(base / entry.file);
    try {
      if (cfg.verify) {
        verify_scenario(s, cfg);
      }
      result.scenarios.push_back(evaluate_scenario(s, cfg));
    } catch (const std::invalid_argument & e) {
      throw InvariantError("scenario " + s.id + ": " + e.what());
    }
  }

  std::vector<MetricsRow> rows;
  rows.reserve(result.scenarios.size());
  for (const auto & r : result.scenarios) rows.push_back(r.row);
  result.aggregate = aggregate(rows, true);
  return result;
}

std::string command_line(std::string_view subcommand, const RunConfig & cfg)
{
  const SelectionConfig & s = cfg.selection;
  std::string out(subcommand);
  out += " --suite " + cfg.suite.string();
  if (subcommand == "eval") {
    out += " --preset " + std::string(to_string(cfg.preset));
  }
  out += " --nll-threshold " + exact(s.nll_threshold);
  out += " --clearance " + exact(s.boundary_clearance);
  out += " --agent-margin " + exact(s.agent_margin);
  out += " --aggregator " + std::string(to_string(s.risk_aggregator));
  out += " --agent-modes " + std::string(s.agent_all_modes ? "all" : "top");
  out += " --risk-kinds " + std::string(s.risk_all_element_kinds ? "all" : "boundary");
  out += " --fixed-scale " + exact(cfg.fixed_scale);
  out += " --convention " + std::string(to_string(cfg.convention));
  if (cfg.verify) {
    out += " --verify";
  }
  return out;
}

std::string render_eval_csv(const EvalResult & result, const RunConfig & cfg)
{
  std::ostringstream os;
  os << "# " << kToolName << " " << kToolVersion << "\n";
  os << "# command: " << command_line("eval", cfg) << "\n";
  os << "# master_seed: " << result.master_seed << "\n";
  os << "# scenarios: " << result.scenarios.size() << "\n";
  os << "scope,id,class,chosen,fallback," << kMetricHeader << "\n";
  for (const auto & r : result.scenarios) {
    os << "scenario," << r.id << "," << to_string(r.scenario_class) << "," << r.chosen_index << ","
       << (r.fallback_used ? 1 : 0) << metric_columns(r.row) << "\n";
  }
  os << "aggregate,overall,,,," << metric_columns(result.aggregate.overall).substr(1) << "\n";
  if (result.aggregate.turn) {
    os << "aggregate,turn,turn,,," << metric_columns(*result.aggregate.turn).substr(1) << "\n";
  }
  if (result.aggregate.straight) {
    os << "aggregate,straight,straight,,," << metric_columns(*result.aggregate.straight).substr(1)
       << "\n";
  }
  return os.str();
}

std::string render_eval_table(const EvalResult & result, const RunConfig & cfg)
{
  std::string out = "preset: " + std::string(to_string(cfg.preset)) +
                    "   convention: " + std::string(to_string(cfg.convention)) +
                    "   scenarios: " + std::to_string(result.scenarios.size()) + "\n\n";
  out += table_header("Scope");
  out += table_line("Overall", result.aggregate.overall);
  if (result.aggregate.turn) out += table_line("Turn", *result.aggregate.turn);
  if (result.aggregate.straight) out += table_line("Straight", *result.aggregate.straight);
  return out;
}

double parse_mix(std::string_view mix)
{
  if (mix == "straight") return 0.0;
  if (mix == "turn") return 1.0;
  if (mix == "mixed") return 0.5;
  const std::string s(mix);
  char * end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !(v >= 0.0 && v <= 1.0)) {
    throw ConfigError("--mix must be straight, turn, mixed or a fraction in [0, 1], got '" + s + "'");
  }
  return v;
}

RoadKind suite_kind(std::size_t index, double turn_fraction)
{
  const auto turns_before = [turn_fraction](std::size_t n) {
    return static_cast<long long>(std::floor(static_cast<double>(n) * turn_fraction + 1e-9));
  };
  return turns_before(index + 1) > turns_before(index) ? RoadKind::Turn : RoadKind::Straight;
}

fs::path cmd_generate(const GenerateOptions & opts)
{
  if (opts.count <= 0) {
    throw ConfigError("--count must be positive");
  }
  if (!(opts.turn_fraction >= 0.0 && opts.turn_fraction <= 1.0)) {
    throw ConfigError("turn fraction must lie in [0, 1]");
  }
  try {
    validate_params(opts.params);
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
  ensure_dir(opts.out_dir);

  Manifest manifest;
  manifest.master_seed = opts.master_seed;
  manifest.turn_fraction = opts.turn_fraction;
  manifest.params = opts.params;
  const int width = std::max<int>(4, static_cast<int>(std::to_string(opts.count - 1).size()));
  for (int i = 0; i < opts.count; ++i) {
    const auto index = static_cast<std::size_t>(i);
    const std::uint64_t seed = derive_seed(opts.master_seed, index);
    Scenario s = generate_scenario(suite_kind(index, opts.turn_fraction), opts.params, seed);
    std::string num = std::to_string(i);
    s.id = "s" + std::string(static_cast<std::size_t>(width) - std::min<std::size_t>(width, num.size()), '0') + num;
    const std::string file = s.id + ".json";
    save_scenario(s, opts.out_dir / file);
    manifest.entries.push_back({s.id, file, s.scenario_class});
  }
  const fs::path manifest_path = opts.out_dir / "manifest.json";
  save_manifest(manifest, manifest_path);
  return manifest_path;
}

EvalOutputs cmd_eval(const RunConfig & cfg)
{
  EvalOutputs out;
  out.result = run_eval(cfg);
  ensure_dir(cfg.out_dir);
  out.csv = cfg.out_dir / (std::string(to_string(cfg.preset)) + ".csv");
  out.table = cfg.out_dir / (std::string(to_string(cfg.preset)) + ".txt");
  write_text_file(out.csv, render_eval_csv(out.result, cfg));
  write_text_file(out.table, render_eval_table(out.result, cfg));
  return out;
}

AblationOutputs cmd_ablate(const RunConfig & base)
{
  AblationOutputs out;
  for (const Preset p : kAllPresets) {
    RunConfig cfg = base;
    cfg.preset = p;
    out.rows.push_back({p, run_eval(cfg)});
  }
  ensure_dir(base.out_dir);
  out.csv = base.out_dir / "ablation.csv";
  out.table = base.out_dir / "ablation.txt";
  write_text_file(out.csv, render_ablation_csv(out.rows, base));
  write_text_file(out.table, render_ablation_table(out.rows));
  return out;
}

std::string render_ablation_csv(const std::vector<AblationRow> & rows, const RunConfig & base)
{
  std::ostringstream os;
  os << "# " << kToolName << " " << kToolVersion << "\n";
  os << "# command: " << command_line("ablate", base) << "\n";
  os << "# master_seed: " << (rows.empty() ? 0 : rows.front().result.master_seed) << "\n";
  os << "id,preset,scope," << kMetricHeader << "\n";
  int id = 1;
  for (const auto & r : rows) {
    const auto & agg = r.result.aggregate;
    const std::string prefix = std::to_string(id) + "," + std::string(to_string(r.preset)) + ",";
    os << prefix << "overall" << metric_columns(agg.overall) << "\n";
    if (agg.turn) os << prefix << "turn" << metric_columns(*agg.turn) << "\n";
    if (agg.straight) os << prefix << "straight" << metric_columns(*agg.straight) << "\n";
    ++id;
  }
  return os.str();
}

std::string render_ablation_table(const std::vector<AblationRow> & rows)
{
  std::string out = pad("ID", 3, true) + " | " + pad("Preset", 10, true) + " | " + pad("CR (%)", 8) +
                    " | " + pad("DACR (%)", 8) + " | " + pad("DACR turn", 9) + " | " +
                    pad("DACR straight", 13) + "\n";
  out += std::string(out.size() - 1, '-') + "\n";
  int id = 1;
  for (const auto & r : rows) {
    const auto & agg = r.result.aggregate;
    out += pad(std::to_string(id++), 3, true) + " | " + pad(std::string(to_string(r.preset)), 10, true) +
           " | " + pad(fixed(100.0 * agg.overall.cr_avg, 2), 8) + " | " +
           pad(fixed(100.0 * agg.overall.dacr_avg, 2), 8) + " | " +
           pad(agg.turn ? fixed(100.0 * agg.turn->dacr_avg, 2) : "-", 9) + " | " +
           pad(agg.straight ? fixed(100.0 * agg.straight->dacr_avg, 2) : "-", 13) + "\n";
  }
  return out;
}

SelectionConfig load_selection_config(const fs::path & path)
{
  using nlohmann::json;
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw ConfigError(path.string() + ": config root must be an object");
  }
  SelectionConfig cfg;
  const auto num = [&](const char * key, double & target) {
    if (const auto it = doc.find(key); it != doc.end()) {
      if (!it->is_number()) throw ConfigError(path.string() + ": '" + key + "' must be a number");
      target = it->get<double>();
    }
  };
  const auto flag = [&](const char * key, bool & target) {
    if (const auto it = doc.find(key); it != doc.end()) {
      if (!it->is_boolean()) throw ConfigError(path.string() + ": '" + key + "' must be a boolean");
      target = it->get<bool>();
    }
  };
  num("nll_threshold", cfg.nll_threshold);
  num("boundary_clearance", cfg.boundary_clearance);
  num("agent_margin", cfg.agent_margin);
  flag("enable_uncertainty_filter", cfg.enable_uncertainty_filter);
  flag("enable_agent_filter", cfg.enable_agent_filter);
  flag("enable_boundary_filter", cfg.enable_boundary_filter);
  flag("agent_all_modes", cfg.agent_all_modes);
  flag("risk_all_element_kinds", cfg.risk_all_element_kinds);
  if (const auto it = doc.find("risk_aggregator"); it != doc.end()) {
    const auto agg = it->is_string() ? risk_aggregator_from_string(it->get<std::string>()) : std::nullopt;
    if (!agg) throw ConfigError(path.string() + ": 'risk_aggregator' must be \"min\" or \"mean\"");
    cfg.risk_aggregator = *agg;
  }
  try {
    validate_config(cfg);
  } catch (const std::invalid_argument & e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return cfg;
}

}  // namespace uncad::app
