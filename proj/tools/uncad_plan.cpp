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

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace
{

using namespace uncad;
using namespace uncad::app;

struct SelectionFlags
{
  std::string suite;
  std::string out;
  std::string config;
  std::string preset{"ucas"};
  std::string convention{"cumulative"};
  std::string aggregator;
  std::string agent_modes;
  std::string risk_kinds;
  double nll_threshold{0.0};
  double clearance{0.0};
  double agent_margin{0.0};
  double fixed_scale{1.0};
  bool verify{false};
};

void add_selection_flags(CLI::App & cmd, SelectionFlags & f, bool with_preset)
{
  cmd.add_option("--suite", f.suite, "Suite manifest (manifest.json)")->required();
  cmd.add_option("--out", f.out, "Output directory for reports")->required();
  cmd.add_option("--config", f.config, "Selection config JSON; flags override it");
  if (with_preset) {
    cmd.add_option("--preset", f.preset, "baseline | unc-only | multimodal | cas | ucas");
  }
  cmd.add_option("--nll-threshold", f.nll_threshold, "Risk NLL below which a candidate is dropped");
  cmd.add_option("--clearance", f.clearance, "Boundary clearance in meters");
  cmd.add_option("--agent-margin", f.agent_margin, "Agent box inflation in meters");
  cmd.add_option("--aggregator", f.aggregator, "Per-trajectory risk: min | mean");
  cmd.add_option("--agent-modes", f.agent_modes, "Agent modes checked: top | all");
  cmd.add_option("--risk-kinds", f.risk_kinds, "Elements scored for risk: boundary | all");
  cmd.add_option("--fixed-scale", f.fixed_scale, "Scale used when a preset discards uncertainty");
  cmd.add_option("--convention", f.convention, "Metric convention: cumulative | instantaneous");
  cmd.add_flag("--verify", f.verify, "Run oracle differential checks on every scenario");
}

RunConfig to_run_config(const CLI::App & cmd, const SelectionFlags & f)
{
  RunConfig cfg;
  cfg.suite = f.suite;
  cfg.out_dir = f.out;
  cfg.verify = f.verify;
  cfg.fixed_scale = f.fixed_scale;
  if (!f.config.empty()) {
    cfg.selection = load_selection_config(f.config);
  }
  if (cmd.count("--nll-threshold")) cfg.selection.nll_threshold = f.nll_threshold;
  if (cmd.count("--clearance")) cfg.selection.boundary_clearance = f.clearance;
  if (cmd.count("--agent-margin")) cfg.selection.agent_margin = f.agent_margin;
  if (!f.aggregator.empty()) {
    const auto agg = risk_aggregator_from_string(f.aggregator);
    if (!agg) throw ConfigError("--aggregator must be min or mean");
    cfg.selection.risk_aggregator = *agg;
  }
  if (!f.agent_modes.empty()) {
    if (f.agent_modes != "top" && f.agent_modes != "all") {
      throw ConfigError("--agent-modes must be top or all");
    }
    cfg.selection.agent_all_modes = f.agent_modes == "all";
  }
  if (!f.risk_kinds.empty()) {
    if (f.risk_kinds != "boundary" && f.risk_kinds != "all") {
      throw ConfigError("--risk-kinds must be boundary or all");
    }
    cfg.selection.risk_all_element_kinds = f.risk_kinds == "all";
  }
  const auto preset = preset_from_string(f.preset);
  if (!preset) throw ConfigError("unknown preset '" + f.preset + "'");
  cfg.preset = *preset;
  const auto convention = metric_convention_from_string(f.convention);
  if (!convention) throw ConfigError("--convention must be cumulative or instantaneous");
  cfg.convention = *convention;
  if (!(cfg.fixed_scale > 0.0)) throw ConfigError("--fixed-scale must be positive");
  try {
    validate_config(cfg.selection);
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

int run(int argc, char ** argv)
{
  CLI::App app{"Uncertainty- and collision-aware trajectory selection with safety metrics"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  GenerateOptions gen;
  std::string mix{"mixed"};
  std::string gen_out;
  auto * generate = app.add_subcommand("generate", "Write a seeded synthetic scenario suite");
  generate->add_option("--count", gen.count, "Number of scenarios")->required();
  generate->add_option("--mix", mix, "straight | turn | mixed | turn fraction in [0, 1]");
  generate->add_option("--noise", gen.params.noise_scale, "Map noise scale in meters");
  generate->add_option("--seed", gen.master_seed, "Master seed");
  generate->add_option("--agents", gen.params.n_agents, "Agents per scenario");
  generate->add_option("--candidates", gen.params.n_candidates, "Candidates for the active command");
  generate->add_option("--out", gen_out, "Output directory")->required();

  SelectionFlags eval_flags;
  auto * eval = app.add_subcommand("eval", "Select and score every scenario of a suite");
  add_selection_flags(*eval, eval_flags, true);

  SelectionFlags ablate_flags;
  auto * ablate = app.add_subcommand("ablate", "Run all five presets and tabulate CR / DACR");
  add_selection_flags(*ablate, ablate_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*generate) {
      gen.turn_fraction = parse_mix(mix);
      gen.out_dir = gen_out;
      std::cout << cmd_generate(gen).string() << "\n";
    } else if (*eval) {
      const auto out = cmd_eval(to_run_config(*eval, eval_flags));
      std::cout << render_eval_table(out.result, to_run_config(*eval, eval_flags));
      std::cout << "\nwrote " << out.csv.string() << " and " << out.table.string() << "\n";
    } else if (*ablate) {
      const auto out = cmd_ablate(to_run_config(*ablate, ablate_flags));
      std::cout << render_ablation_table(out.rows);
      std::cout << "\nwrote " << out.csv.string() << " and " << out.table.string() << "\n";
    }
  } catch (const ConfigError & e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError & e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvariantError & e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const OracleMismatch & e) {
    std::cerr << "oracle mismatch: " << e.what() << "\n";
    return kExitOracle;
  } catch (const IoError & e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument & e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char ** argv) { return run(argc, argv); }
