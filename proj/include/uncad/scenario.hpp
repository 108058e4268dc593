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

#ifndef UNCAD__SCENARIO_HPP_
#define UNCAD__SCENARIO_HPP_

#include "uncad/geometry.hpp"
#include "uncad/map_model.hpp"
#include "uncad/metrics.hpp"
#include "uncad/trajectory.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace uncad
{

/// Current scenario and manifest schema version.
inline constexpr int kScenarioSchemaVersion = 1;

/**
 * @brief One evaluation frame: perceived map, agent forecasts and their true
 * futures, the ego state, the planner's candidates and the ego ground truth.
 */
struct Scenario
{
  std::string id;
  std::uint64_t seed{0};
  UncertainMap map;
  std::vector<AgentPrediction> agents;
  /// True boxes per agent per timestep, index-aligned with `agents`.
  std::vector<std::vector<OrientedBox>> agent_gt;
  Pose2 ego_pose;
  VehicleDims ego_dims;
  Command command{Command::GoStraight};
  CandidateSet candidates;
  std::vector<Pose2> ego_gt_future;
  ScenarioClass scenario_class{ScenarioClass::Straight};

  friend bool operator==(const Scenario &, const Scenario &) = default;
};

/// Checks grid lengths, agent invariants and class consistency. Throws InvariantError.
void validate_scenario(const Scenario & s);

GroundTruth ground_truth(const Scenario & s);

enum class RoadKind { Straight, Turn };

struct GeneratorParams
{
  /// Laplace scale of the perceived map error, meters.
  double noise_scale{0.5};
  int n_agents{2};
  /// Candidates for the active command.
  int n_candidates{5};
  /// Magnitude range of the road curvature for turns, 1/m.
  std::array<double, 2> curvature_range{0.04, 0.09};
  /// Ego speed range, m/s.
  std::array<double, 2> speed_range{4.0, 8.0};
  /// Half the drivable corridor width, meters.
  double corridor_half_width{3.5};
  VehicleDims ego_dims{4.0, 2.0};
  std::size_t points_per_element{kDefaultPointsPerElement};

  friend bool operator==(const GeneratorParams &, const GeneratorParams &) = default;
};

void validate_params(const GeneratorParams & params);

/**
 * @brief Builds a synthetic frame on a straight or constant-curvature corridor.
 *
 * The map holds two boundaries and a centre divider, perturbed with
 * calibrated Laplace noise. Candidates are constant-curvature arcs around a
 * reference plan whose lateral and curvature errors scale with the map noise;
 * confidences are a softmax of negative deviation from that reference.
 * Agents are scripted constant-velocity vehicles and pedestrians.
 */
Scenario generate_scenario(RoadKind kind, const GeneratorParams & params, std::uint64_t seed);

/// Lateral distance of `p` from the corridor centreline the scenario was built on.
double centerline_offset(double curvature, const Point2 & p);

std::string serialize_scenario(const Scenario & s);
Scenario parse_scenario(const std::string & text);

void save_scenario(const Scenario & s, const std::filesystem::path & path);
Scenario load_scenario(const std::filesystem::path & path);

struct ManifestEntry
{
  std::string id;
  /// Relative to the manifest's directory.
  std::string file;
  ScenarioClass scenario_class{ScenarioClass::Straight};

  friend bool operator==(const ManifestEntry &, const ManifestEntry &) = default;
};

struct Manifest
{
  std::uint64_t master_seed{0};
  double turn_fraction{0.5};
  GeneratorParams params;
  std::vector<ManifestEntry> entries;

  friend bool operator==(const Manifest &, const Manifest &) = default;
};

std::string serialize_manifest(const Manifest & m);
Manifest parse_manifest(const std::string & text);
void save_manifest(const Manifest & m, const std::filesystem::path & path);
Manifest load_manifest(const std::filesystem::path & path);

std::string read_text_file(const std::filesystem::path & path);
void write_text_file(const std::filesystem::path & path, const std::string & text);

}  // namespace uncad

#endif  // UNCAD__SCENARIO_HPP_
