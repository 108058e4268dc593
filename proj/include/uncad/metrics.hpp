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

#ifndef UNCAD__METRICS_HPP_
#define UNCAD__METRICS_HPP_

#include "uncad/geometry.hpp"
#include "uncad/trajectory.hpp"

#include <array>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace uncad
{

/// Step counts of the 1 s, 2 s and 3 s horizons.
inline constexpr std::array<std::size_t, 3> kHorizonSteps{2, 4, 6};

enum class ScenarioClass { Turn, Straight };

std::string_view to_string(ScenarioClass c);
std::optional<ScenarioClass> scenario_class_from_string(std::string_view name);

/// Turn when the ego future rotates by more than this, radians (15 degrees).
inline constexpr double kTurnHeadingThreshold = 15.0 * 3.14159265358979323846 / 180.0;

ScenarioClass classify_future(std::span<const Pose2> ego_future);

/**
 * Cumulative: DE averages the error over steps up to the horizon and CR flags
 * any overlap up to it. Instantaneous: both look only at the horizon step.
 */
enum class MetricConvention { Cumulative, Instantaneous };

std::string_view to_string(MetricConvention convention);
std::optional<MetricConvention> metric_convention_from_string(std::string_view name);

struct GroundTruth
{
  std::vector<Pose2> ego_future;
  /// One box per timestep for each agent.
  std::vector<std::vector<OrientedBox>> agent_futures;
  MultiPolygon drivable_area;
};

struct MetricsRow
{
  std::array<double, 3> de{};
  std::array<double, 3> cr{};
  std::array<double, 3> dacr{};
  double de_avg{0.0};
  double cr_avg{0.0};
  double dacr_avg{0.0};
  std::optional<ScenarioClass> scenario_class;

  friend bool operator==(const MetricsRow &, const MetricsRow &) = default;
};

double displacement_error(
  const CandidateTrajectory & traj, const GroundTruth & gt, std::size_t horizon_steps,
  MetricConvention convention = MetricConvention::Cumulative);

bool collision_rate_frame(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const GroundTruth & gt,
  std::size_t horizon_steps, MetricConvention convention = MetricConvention::Cumulative);

/// Fraction of the first `horizon_steps` steps with a footprint corner outside `da`.
double dacr_frame(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const MultiPolygon & da,
  std::size_t horizon_steps);

/// DE, CR and DACR of one planned trajectory at the three standard horizons.
MetricsRow evaluate_frame(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const GroundTruth & gt,
  ScenarioClass scenario_class, MetricConvention convention);

struct AggregateReport
{
  MetricsRow overall;
  std::optional<MetricsRow> turn;
  std::optional<MetricsRow> straight;
};

/// Per-horizon means. Strata without scenarios are left empty.
AggregateReport aggregate(std::span<const MetricsRow> rows, bool stratify);

}  // namespace uncad

#endif  // UNCAD__METRICS_HPP_
