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

#include "uncad/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uncad
{
namespace
{

void check_horizon(std::size_t horizon_steps, std::size_t available, const char * who)
{
  if (horizon_steps < 1 || horizon_steps > available) {
    throw std::invalid_argument(
      std::string(who) + ": horizon of " + std::to_string(horizon_steps) + " steps out of range");
  }
}

double mean3(const std::array<double, 3> & v) { return (v[0] + v[1] + v[2]) / 3.0; }

void fill_averages(MetricsRow & row)
{
  row.de_avg = mean3(row.de);
  row.cr_avg = mean3(row.cr);
  row.dacr_avg = mean3(row.dacr);
}

MetricsRow mean_row(std::span<const MetricsRow> rows)
{
  MetricsRow out;
  for (const auto & r : rows) {
    for (std::size_t h = 0; h < 3; ++h) {
      out.de[h] += r.de[h];
      out.cr[h] += r.cr[h];
      out.dacr[h] += r.dacr[h];
    }
  }
  const double n = static_cast<double>(rows.size());
  for (std::size_t h = 0; h < 3; ++h) {
    out.de[h] /= n;
    out.cr[h] /= n;
    out.dacr[h] /= n;
  }
  fill_averages(out);
  return out;
}

}  // namespace

std::string_view to_string(ScenarioClass c) { return c == ScenarioClass::Turn ? "turn" : "straight"; }

std::optional<ScenarioClass> scenario_class_from_string(std::string_view name)
{
  if (name == "turn") return ScenarioClass::Turn;
  if (name == "straight") return ScenarioClass::Straight;
  return std::nullopt;
}

ScenarioClass classify_future(std::span<const Pose2> ego_future)
{
  if (ego_future.empty()) {
    throw std::invalid_argument("classify_future: empty future");
  }
  const double change =
    std::abs(normalize_angle(ego_future.back().heading() - ego_future.front().heading()));
  return change > kTurnHeadingThreshold ? ScenarioClass::Turn : ScenarioClass::Straight;
}

std::string_view to_string(MetricConvention convention)
{
  return convention == MetricConvention::Cumulative ? "cumulative" : "instantaneous";
}

std::optional<MetricConvention> metric_convention_from_string(std::string_view name)
{
  if (name == "cumulative") return MetricConvention::Cumulative;
  if (name == "instantaneous") return MetricConvention::Instantaneous;
  return std::nullopt;
}

double displacement_error(
  const CandidateTrajectory & traj, const GroundTruth & gt, std::size_t horizon_steps,
  MetricConvention convention)
{
  check_horizon(horizon_steps, std::min(traj.size(), gt.ego_future.size()), "displacement_error");
  if (convention == MetricConvention::Instantaneous) {
    const std::size_t t = horizon_steps - 1;
    return distance(traj.waypoints[t], gt.ego_future[t].position());
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < horizon_steps; ++t) {
    sum += distance(traj.waypoints[t], gt.ego_future[t].position());
  }
  return sum / static_cast<double>(horizon_steps);
}

bool collision_rate_frame(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const GroundTruth & gt,
  std::size_t horizon_steps, MetricConvention convention)
{
  for (const auto & agent : gt.agent_futures) {
    if (agent.size() != traj.size()) {
      throw std::invalid_argument("collision_rate_frame: agent future on a different grid");
    }
  }
  check_horizon(horizon_steps, traj.size(), "collision_rate_frame");
  const std::size_t first = convention == MetricConvention::Cumulative ? 0 : horizon_steps - 1;
  for (std::size_t t = first; t < horizon_steps; ++t) {
    const OrientedBox ego(traj.waypoints[t], traj.headings[t], ego_dims.length, ego_dims.width);
    for (const auto & agent : gt.agent_futures) {
      if (boxes_overlap(ego, agent[t])) {
        return true;
      }
    }
  }
  return false;
}

double dacr_frame(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const MultiPolygon & da,
  std::size_t horizon_steps)
{
  check_horizon(horizon_steps, traj.size(), "dacr_frame");
  std::size_t conflicts = 0;
  for (std::size_t t = 0; t < horizon_steps; ++t) {
    for (const auto & c : vehicle_corners(traj.pose(t), ego_dims.length, ego_dims.width)) {
      if (!point_in_multipolygon(c, da)) {
        ++conflicts;
        break;
      }
    }
  }
  return static_cast<double>(conflicts) / static_cast<double>(horizon_steps);
}

MetricsRow evaluate_frame(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const GroundTruth & gt,
  ScenarioClass scenario_class, MetricConvention convention)
{
  MetricsRow row;
  for (std::size_t h = 0; h < kHorizonSteps.size(); ++h) {
    const std::size_t steps = kHorizonSteps[h];
    row.de[h] = displacement_error(traj, gt, steps, convention);
    row.cr[h] = collision_rate_frame(traj, ego_dims, gt, steps, convention) ? 1.0 : 0.0;
    row.dacr[h] = dacr_frame(traj, ego_dims, gt.drivable_area, steps);
  }
  fill_averages(row);
  row.scenario_class = scenario_class;
  return row;
}

AggregateReport aggregate(std::span<const MetricsRow> rows, bool stratify)
{
  if (rows.empty()) {
    throw std::invalid_argument("aggregate: no rows");
  }
  AggregateReport report;
  report.overall = mean_row(rows);
  if (!stratify) {
    return report;
  }
  std::vector<MetricsRow> turn;
  std::vector<MetricsRow> straight;
  for (const auto & r : rows) {
    if (!r.scenario_class) {
      throw std::invalid_argument("aggregate: stratification needs a scenario class on every row");
    }
    (*r.scenario_class == ScenarioClass::Turn ? turn : straight).push_back(r);
  }
  if (!turn.empty()) {
    report.turn = mean_row(turn);
    report.turn->scenario_class = ScenarioClass::Turn;
  }
  if (!straight.empty()) {
    report.straight = mean_row(straight);
    report.straight->scenario_class = ScenarioClass::Straight;
  }
  return report;
}

}  // namespace uncad
