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

#include "uncad/trajectory.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace uncad
{

std::string_view to_string(Command command)
{
  switch (command) {
    case Command::TurnLeft:
      return "turn_left";
    case Command::TurnRight:
      return "turn_right";
    case Command::GoStraight:
      return "go_straight";
  }
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view name)
{
  for (const Command c : kAllCommands) {
    if (to_string(c) == name) {
      return c;
    }
  }
  return std::nullopt;
}

std::vector<double> chord_headings(const std::vector<Point2> & waypoints, double initial_heading)
{
  std::vector<double> headings;
  headings.reserve(waypoints.size());
  for (std::size_t t = 0; t < waypoints.size(); ++t) {
    if (t == 0) {
      headings.push_back(normalize_angle(initial_heading));
      continue;
    }
    const Point2 d = waypoints[t] - waypoints[t - 1];
    // A stationary step keeps the previous heading.
    headings.push_back(norm(d) > 0.0 ? std::atan2(d.y, d.x) : headings.back());
  }
  return headings;
}

void validate_trajectory(const CandidateTrajectory & traj)
{
  if (traj.waypoints.empty() || traj.waypoints.size() != traj.headings.size()) {
    throw std::invalid_argument("CandidateTrajectory: waypoint and heading counts differ");
  }
  for (std::size_t t = 0; t < traj.waypoints.size(); ++t) {
    if (!is_finite(traj.waypoints[t]) || !std::isfinite(traj.headings[t])) {
      throw std::invalid_argument("CandidateTrajectory: non-finite waypoint or heading");
    }
  }
  if (!std::isfinite(traj.confidence)) {
    throw std::invalid_argument("CandidateTrajectory: non-finite confidence");
  }
}

CandidateSet::CandidateSet(std::map<Command, std::vector<CandidateTrajectory>> per_command)
: per_command_(std::move(per_command))
{
  for (const Command c : kAllCommands) {
    const auto it = per_command_.find(c);
    if (it == per_command_.end() || it->second.empty()) {
      throw std::invalid_argument(
        "CandidateSet: no candidates for command " + std::string(to_string(c)));
    }
    for (const auto & traj : it->second) {
      validate_trajectory(traj);
    }
  }
}

std::size_t AgentPrediction::top_mode() const
{
  std::size_t best = 0;
  for (std::size_t m = 1; m < modes.size(); ++m) {
    if (modes[m].confidence > modes[best].confidence) {
      best = m;
    }
  }
  return best;
}

void validate_agent(const AgentPrediction & agent)
{
  if (agent.modes.empty()) {
    throw std::invalid_argument("AgentPrediction " + agent.id + ": no modes");
  }
  if (!(agent.dims.length > 0.0) || !(agent.dims.width > 0.0)) {
    throw std::invalid_argument("AgentPrediction " + agent.id + ": non-positive dimensions");
  }
  double total = 0.0;
  for (const auto & mode : agent.modes) {
    if (mode.trajectory.size() != agent.modes.front().trajectory.size()) {
      throw std::invalid_argument("AgentPrediction " + agent.id + ": modes differ in length");
    }
    if (!(mode.confidence >= 0.0) || !(mode.confidence <= 1.0)) {
      throw std::invalid_argument("AgentPrediction " + agent.id + ": confidence outside [0, 1]");
    }
    total += mode.confidence;
  }
  if (total > 1.0 + 1e-6) {
    throw std::invalid_argument("AgentPrediction " + agent.id + ": confidences sum above 1");
  }
}

}  // namespace uncad
