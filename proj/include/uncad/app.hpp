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

#ifndef UNCAD__APP_HPP_
#define UNCAD__APP_HPP_

#include "uncad/metrics.hpp"
#include "uncad/scenario.hpp"
#include "uncad/selection.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uncad::app
{

inline constexpr std::string_view kToolName = "uncad-plan";
inline constexpr std::string_view kToolVersion = "1.0.0";

/// Exit codes of the command line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitParse = 3,
  kExitInvariant = 4,
  kExitOracle = 5,
  kExitIo = 6,
};

/// Ablation presets, in report order.
enum class Preset { Baseline, UncOnly, Multimodal, Cas, Ucas };

inline constexpr std::array<Preset, 5> kAllPresets{
  Preset::Baseline, Preset::UncOnly, Preset::Multimodal, Preset::Cas, Preset::Ucas};

std::string_view to_string(Preset preset);
std::optional<Preset> preset_from_string(std::string_view name);

/// What a preset changes relative to the base selection config.
struct PresetSetup
{
  /// Keep only the most confident candidate per command.
  bool single_candidate{false};
  /// Replace the map's scales with RunConfig::fixed_scale.
  bool fixed_scale{false};
  SelectionConfig selection;
};

PresetSetup preset_setup(Preset preset, const SelectionConfig & base);

struct RunConfig
{
  std::filesystem::path suite;
  SelectionConfig selection;
  MetricConvention convention{MetricConvention::Cumulative};
  Preset preset{Preset::Ucas};
  std::filesystem::path out_dir;
  bool verify{false};
  /// Scale used by presets that discard the perceived uncertainty, meters.
  double fixed_scale{1.0};
};

struct ScenarioResult
{
  std::string id;
  ScenarioClass scenario_class{ScenarioClass::Straight};
  MetricsRow row;
  std::size_t chosen_index{0};
  bool fallback_used{false};
};

struct EvalResult
{
  std::uint64_t master_seed{0};
  std::vector<ScenarioResult> scenarios;
  AggregateReport aggregate;
};

/// Selection plus metrics for one loaded scenario under a preset.
ScenarioResult evaluate_scenario(const Scenario & s, const RunConfig & cfg);

/// Differential checks of one scenario against the oracles. Throws OracleMismatch.
void verify_scenario(const Scenario & s, const RunConfig & cfg);

/// Loads the suite and evaluates every scenario; rows are ordered by id.
EvalResult run_eval(const RunConfig & cfg);

/// Flags that reproduce a run, as echoed in report headers.
std::string command_line(std::string_view subcommand, const RunConfig & cfg);

std::string render_eval_csv(const EvalResult & result, const RunConfig & cfg);
std::string render_eval_table(const EvalResult & result, const RunConfig & cfg);

struct GenerateOptions
{
  int count{0};
  /// Fraction of turn scenarios, 0 = all straight, 1 = all turns.
  double turn_fraction{0.5};
  GeneratorParams params;
  std::uint64_t master_seed{0};
  std::filesystem::path out_dir;
};

/// Parses "straight", "turn", "mixed" or a number in [0, 1]. Throws ConfigError.
double parse_mix(std::string_view mix);

/// Deterministic kind of the i-th scenario for a given turn fraction.
RoadKind suite_kind(std::size_t index, double turn_fraction);

/// Writes scenario files and manifest.json; returns the manifest path.
std::filesystem::path cmd_generate(const GenerateOptions & opts);

struct EvalOutputs
{
  std::filesystem::path csv;
  std::filesystem::path table;
  EvalResult result;
};

EvalOutputs cmd_eval(const RunConfig & cfg);

struct AblationRow
{
  Preset preset{Preset::Baseline};
  EvalResult result;
};

struct AblationOutputs
{
  std::filesystem::path csv;
  std::filesystem::path table;
  std::vector<AblationRow> rows;
};

/// All five presets on the same suite.
AblationOutputs cmd_ablate(const RunConfig & base);

std::string render_ablation_csv(const std::vector<AblationRow> & rows, const RunConfig & base);
std::string render_ablation_table(const std::vector<AblationRow> & rows);

/// Reads a selection config JSON document; missing keys keep their defaults.
SelectionConfig load_selection_config(const std::filesystem::path & path);

}  // namespace uncad::app

#endif  // UNCAD__APP_HPP_
