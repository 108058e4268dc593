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

#include "uncad/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uncad
{
namespace
{

OrientedBox ego_box(const CandidateTrajectory & traj, std::size_t t, const VehicleDims & dims)
{
  return OrientedBox(traj.waypoints[t], traj.headings[t], dims.length, dims.width);
}

bool mode_hits(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims, const AgentPrediction & agent,
  const AgentMode & mode, double margin)
{
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const Pose2 & pose = mode.trajectory[t];
    const OrientedBox other =
      OrientedBox(pose.position(), pose.heading(), agent.dims.length, agent.dims.width)
        .inflated(margin);
    if (boxes_overlap(ego_box(traj, t, ego_dims), other)) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::string_view to_string(RiskAggregator aggregator)
{
  return aggregator == RiskAggregator::Min ? "min" : "mean";
}

std::optional<RiskAggregator> risk_aggregator_from_string(std::string_view name)
{
  if (name == "min") return RiskAggregator::Min;
  if (name == "mean") return RiskAggregator::Mean;
  return std::nullopt;
}

void validate_config(const SelectionConfig & cfg)
{
  if (!std::isfinite(cfg.nll_threshold)) {
    throw std::invalid_argument("SelectionConfig: nll_threshold must be finite");
  }
  if (!(cfg.boundary_clearance >= 0.0) || !std::isfinite(cfg.boundary_clearance)) {
    throw std::invalid_argument("SelectionConfig: boundary_clearance must be >= 0");
  }
  if (!(cfg.agent_margin >= 0.0) || !std::isfinite(cfg.agent_margin)) {
    throw std::invalid_argument("SelectionConfig: agent_margin must be >= 0");
  }
}

const std::vector<CandidateTrajectory> & command_filter(const CandidateSet & set, Command command)
{
  const auto it = set.per_command().find(command);
  if (it == set.per_command().end()) {
    throw std::invalid_argument(
      "command_filter: no candidates for command " + std::string(to_string(command)));
  }
  return it->second;
}

double trajectory_risk(
  const CandidateTrajectory & traj, std::span<const UncertainPolyline> boundaries,
  RiskAggregator aggregator)
{
  if (boundaries.empty()) {
    throw std::invalid_argument("trajectory_risk: no boundary elements");
  }
  if (traj.waypoints.empty()) {
    throw std::invalid_argument("trajectory_risk: empty trajectory");
  }
  double lowest = std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto & wp : traj.waypoints) {
    const double nll = min_nll_to_elements(wp, boundaries);
    lowest = std::min(lowest, nll);
    sum += nll;
  }
  return aggregator == RiskAggregator::Min ? lowest
                                           : sum / static_cast<double>(traj.waypoints.size());
}

bool agent_collision_check(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims,
  std::span<const AgentPrediction> agents, double agent_margin, bool all_modes)
{
  for (const auto & agent : agents) {
    for (const auto & mode : agent.modes) {
      if (mode.trajectory.size() != traj.size()) {
        throw std::invalid_argument(
          "agent_collision_check: agent " + agent.id + " is on a different timestep grid");
      }
    }
  }
  for (const auto & agent : agents) {
    if (all_modes) {
      for (const auto & mode : agent.modes) {
        if (mode_hits(traj, ego_dims, agent, mode, agent_margin)) {
          return true;
        }
      }
    } else if (mode_hits(traj, ego_dims, agent, agent.modes[agent.top_mode()], agent_margin)) {
      return true;
    }
  }
  return false;
}

bool boundary_collision_check(
  const CandidateTrajectory & traj, const VehicleDims & ego_dims,
  std::span<const Polyline> boundaries, double clearance)
{
  if (boundaries.empty()) {
    throw std::invalid_argument("boundary_collision_check: no boundaries");
  }
  for (std::size_t t = 0; t < traj.size(); ++t) {
    for (const auto & corner : ego_box(traj, t, ego_dims).corners()) {
      for (const auto & line : boundaries) {
        if (dist_point_polyline(corner, line) < clearance) {
          return true;
        }
      }
    }
  }
  return false;
}

Decision decide(std::vector<CandidateRecord> & records, const SelectionConfig & cfg)
{
  if (records.empty()) {
    throw std::invalid_argument("decide: no candidates");
  }
  bool any_positive = false;
  for (auto & r : records) {
    const bool zeroed = (cfg.enable_uncertainty_filter && r.risk_nll < cfg.nll_threshold) ||
                        (cfg.enable_agent_filter && r.agent_collision) ||
                        (cfg.enable_boundary_filter && r.boundary_collision);
    r.final_score = zeroed ? 0.0 : r.confidence;
    any_positive = any_positive || r.final_score != 0.0;
  }

  if (any_positive) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto & c = records[i];
      const auto & b = records[best];
      if (c.final_score > b.final_score ||
          (c.final_score == b.final_score && cfg.enable_uncertainty_filter &&
           c.risk_nll > b.risk_nll)) {
        best = i;
      }
    }
    return {best, false};
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto & c = records[i];
    if (cfg.enable_agent_filter && c.agent_collision) {
      continue;
    }
    if (!best) {
      best = i;
      continue;
    }
    const auto & b = records[*best];
    if (c.risk_nll > b.risk_nll || (c.risk_nll == b.risk_nll && c.confidence > b.confidence)) {
      best = i;
    }
  }
  if (!best) {
    best = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      if (records[i].confidence > records[*best].confidence) {
        best = i;
      }
    }
  }
  return {*best, true};
}

SelectionReport ucas_select(
  const CandidateSet & set, Command command, const UncertainMap & map,
  std::span<const AgentPrediction> agents, const VehicleDims & ego_dims,
  const SelectionConfig & cfg)
{
  validate_config(cfg);
  const auto & candidates = command_filter(set, command);

  const std::vector<UncertainPolyline> risk_elements =
    cfg.risk_all_element_kinds ? all_elements(map) : boundary_elements(map);
  std::vector<Polyline> boundary_lines;
  for (const auto & e : boundary_elements(map)) {
    boundary_lines.push_back(e.mean_polyline());
  }
  if (cfg.enable_uncertainty_filter && risk_elements.empty()) {
    throw std::invalid_argument("ucas_select: uncertainty filter needs map boundaries");
  }
  if (cfg.enable_boundary_filter && boundary_lines.empty()) {
    throw std::invalid_argument("ucas_select: boundary filter needs map boundaries");
  }

  SelectionReport report;
  report.candidates.reserve(candidates.size());
  for (const auto & traj : candidates) {
    if (!(traj.confidence >= 0.0)) {
      throw std::invalid_argument("ucas_select: negative candidate confidence");
    }
    CandidateRecord r;
    r.confidence = traj.confidence;
    r.risk_nll = risk_elements.empty()
                   ? std::numeric_limits<double>::infinity()
                   : trajectory_risk(traj, risk_elements, cfg.risk_aggregator);
    r.agent_collision =
      agent_collision_check(traj, ego_dims, agents, cfg.agent_margin, cfg.agent_all_modes);
    r.boundary_collision =
      !boundary_lines.empty() &&
      boundary_collision_check(traj, ego_dims, boundary_lines, cfg.boundary_clearance);
    report.candidates.push_back(r);
  }

  const Decision d = decide(report.candidates, cfg);
  report.chosen_index = d.index;
  report.fallback_used = d.fallback_used;
  report.chosen = candidates[d.index];
  return report;
}

}  // namespace uncad
