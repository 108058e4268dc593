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

#ifndef UNCAD__SELECTION_HPP_
#define UNCAD__SELECTION_HPP_

#include "uncad/geometry.hpp"
#include "uncad/map_model.hpp"
#include "uncad/trajectory.hpp"
#include "uncad/uncertainty.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace uncad
{

/// How per-waypoint NLLs collapse into one trajectory risk.
enum class RiskAggregator { Min, Mean };

std::string_view to_string(RiskAggregator aggregator);
std::optional<RiskAggregator> risk_aggregator_from_string(std::string_view name);

struct SelectionConfig
{
  /// Risk below this zeroes the candidate. Dimensionless NLL.
  double nll_threshold{2.0};
  /// Minimum corner distance to a perceived boundary, meters.
  double boundary_clearance{0.3};
  /// Agent boxes grow by this much on every side, meters.
  double agent_margin{0.0};
  RiskAggregator risk_aggregator{RiskAggregator::Min};
  bool enable_uncertainty_filter{true};
  bool enable_agent_filter{true};
  bool enable_boundary_filter{true};
  /// Check every predicted agent mode instead of only the most confident one.
  bool agent_all_modes{false};
  /// Score risk against every map element kind, not just boundaries.
  bool risk_all_element_kinds{false};

  friend bool operator==(const SelectionConfig &, const SelectionConfig &) = default;
};

void validate_config(const SelectionConfig & cfg);

struct CandidateRecord
{
  double confidence{0.0};
  double risk_nll{0.0};
  bool agent_collision{false};
  bool boundary_collision{false};
  double final_score{0.0};

  friend bool operator==(const CandidateRecord &, const CandidateRecord &) = default;
};

struct SelectionReport
{
  CandidateTrajectory chosen;
  std::size_t chosen_index{0};
  std::vector<CandidateRecord> candidates;
  bool fallback_used{false};

  friend bool operator==(const SelectionReport &, const SelectionReport &) = default;
};

/// The candidates registered for `command`.
const std::vector<CandidateTrajectory> & command_filter(const CandidateSet & set, Command command);

double trajectory_risk(
  const CandidateTrajectory & traj, std::span<const UncertainPolyline> boundaries,
  RiskAggregator aggregator);

/// Time-aligned footprint overlap against each agent's most confident mode
/// (or all modes when `all_modes` is set).
bool agent_collision_check(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims,
  std::span<const AgentPrediction> agents, double agent_margin = 0.0, bool all_modes = false);

/// True if any footprint corner comes strictly closer than `clearance` to a boundary.
bool boundary_collision_check(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims,
  std::span<const Polyline> boundaries, double clearance);

/// Applies the zeroing rule to precomputed records and picks the winner.
/// Fills in final_score on each record.
struct Decision
{
  std::size_t index{0};
  bool fallback_used{false};
};
Decision decide(std::vector<CandidateRecord> & records, const SelectionConfig & cfg);

/**
 * @brief Uncertainty- and collision-aware selection over one command's candidates.
 *
 * Each candidate keeps its confidence unless a filter flags it: a risk below
 * the NLL threshold, an agent overlap, or a boundary clearance violation. The
 * highest surviving score wins. Ties go to the higher risk NLL (when the
 * uncertainty filter is on) and then to the lower index. If every score is
 * zero the fallback prefers candidates clear of agents and picks the one with
 * the largest risk NLL; with no such candidate it picks the highest raw
 * confidence.
 */
SelectionReport ucas_select(
  const CandidateSet & set, Command command, const UncertainMap & map,
  std::span<const AgentPrediction> agents, const VehicleDims & ego_dims,
  const SelectionConfig & cfg);

}  // namespace uncad

#endif  // UNCAD__SELECTION_HPP_
