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

#ifndef UNCAD__TRAJECTORY_HPP_
#define UNCAD__TRAJECTORY_HPP_

#include "uncad/geometry.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uncad
{

/// Future steps per trajectory (3 s at 2 Hz).
inline constexpr std::size_t kFutureSteps = 6;
/// Seconds between consecutive waypoints.
inline constexpr double kStepSeconds = 0.5;

enum class Command { TurnLeft, TurnRight, GoStraight };

inline constexpr std::array<Command, 3> kAllCommands{
  Command::TurnLeft, Command::TurnRight, Command::GoStraight};

std::string_view to_string(Command command);
std::optional<Command> command_from_string(std::string_view name);

struct VehicleDims
{
  double length{4.0};
  double width{2.0};

  friend bool operator==(const VehicleDims &, const VehicleDims &) = default;
};

/**
 * @brief One ego plan: waypoints at 0.5 s spacing, a heading per waypoint, and
 * the head's confidence.
 */
struct CandidateTrajectory
{
  std::vector<Point2> waypoints;
  std::vector<double> headings;
  double confidence{0.0};

  std::size_t size() const { return waypoints.size(); }
  Pose2 pose(std::size_t t) const { return Pose2(waypoints.at(t), headings.at(t)); }

  friend bool operator==(const CandidateTrajectory &, const CandidateTrajectory &) = default;
};

/// Headings from consecutive waypoints; the first uses `initial_heading`.
std::vector<double> chord_headings(const std::vector<Point2> & waypoints, double initial_heading);

/// Throws std::invalid_argument if lengths disagree or values are non-finite.
void validate_trajectory(const CandidateTrajectory & traj);

/// Candidates per driving command. Every command must be present with at least one entry.
class CandidateSet
{
public:
  CandidateSet() = default;
  explicit CandidateSet(std::map<Command, std::vector<CandidateTrajectory>> per_command);

  const std::map<Command, std::vector<CandidateTrajectory>> & per_command() const
  {
    return per_command_;
  }

  friend bool operator==(const CandidateSet &, const CandidateSet &) = default;

private:
  std::map<Command, std::vector<CandidateTrajectory>> per_command_;
};

struct AgentMode
{
  std::vector<Pose2> trajectory;
  double confidence{0.0};

  friend bool operator==(const AgentMode &, const AgentMode &) = default;
};

/// Multi-modal forecast for one traffic participant.
struct AgentPrediction
{
  std::string id;
  VehicleDims dims;
  std::vector<AgentMode> modes;

  /// Index of the first mode with the largest confidence.
  std::size_t top_mode() const;

  friend bool operator==(const AgentPrediction &, const AgentPrediction &) = default;
};

/// Checks mode count, per-mode length, and the confidence budget.
void validate_agent(const AgentPrediction & agent);

}  // namespace uncad

#endif  // UNCAD__TRAJECTORY_HPP_
