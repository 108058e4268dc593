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

#include "uncad/scenario.hpp"

#include "uncad/errors.hpp"
#include "uncad/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace uncad
{
namespace
{

// Stream tags, one generator per part of a scenario.
constexpr std::uint64_t kRoadStream = 0x726f6164;
constexpr std::uint64_t kMapStream = 0x6d6170;
constexpr std::uint64_t kPlannerStream = 0x706c616e;
constexpr std::uint64_t kAgentStream = 0x6167656e;

// Planner error model, per meter of map noise.
constexpr double kLateralBiasPerNoise = 1.5;
constexpr double kRelativeCurvatureBiasPerNoise = 0.4;
constexpr double kAbsoluteCurvatureBiasPerNoise = 0.002;

// Spread of the candidate variants around the reference plan.
constexpr double kVariantLateralStep = 0.4;
constexpr double kVariantCurvatureStep = 0.03;

// Softmax temperature for candidate confidences, meters.
constexpr double kConfidenceTemperature = 1.0;

constexpr double kStraightEpsilon = 1e-12;
constexpr std::size_t kDrivableAreaSamples = 80;

double step_time(std::size_t t) { return static_cast<double>(t + 1) * kStepSeconds; }

/// Point reached after driving `s` meters on a constant-curvature arc.
Point2 arc_point(const Point2 & start, double heading, double curvature, double s)
{
  if (std::abs(curvature) < kStraightEpsilon) {
    return {start.x + s * std::cos(heading), start.y + s * std::sin(heading)};
  }
  return {
    start.x + (std::sin(heading + curvature * s) - std::sin(heading)) / curvature,
    start.y - (std::cos(heading + curvature * s) - std::cos(heading)) / curvature};
}

/// Corridor frame anchored at the origin with heading 0.
struct Road
{
  double curvature{0.0};

  Point2 at(double s, double d) const
  {
    if (std::abs(curvature) < kStraightEpsilon) {
      return {s, d};
    }
    const double phi = curvature * s;
    const double r = 1.0 / curvature - d;
    return {r * std::sin(phi), 1.0 / curvature - r * std::cos(phi)};
  }

  double heading(double s) const { return curvature * s; }
};

std::vector<Point2> sample_edge(const Road & road, double d, double s0, double s1, std::size_t n)
{
  std::vector<Point2> pts;
  pts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s0 + (s1 - s0) * static_cast<double>(i) / static_cast<double>(n - 1);
    pts.push_back(road.at(s, d));
  }
  return pts;
}

UncertainPolyline exact_element(const std::vector<Point2> & pts)
{
  std::vector<LaplacePoint> lps;
  lps.reserve(pts.size());
  for (const auto & p : pts) {
    lps.emplace_back(p, kMinLaplaceScale, kMinLaplaceScale);
  }
  return UncertainPolyline(std::move(lps));
}

struct ArcPlan
{
  double lateral{0.0};
  double curvature{0.0};
};

std::vector<Point2> arc_waypoints(const ArcPlan & plan, double speed)
{
  std::vector<Point2> wps;
  wps.reserve(kFutureSteps);
  for (std::size_t t = 0; t < kFutureSteps; ++t) {
    wps.push_back(arc_point({0.0, plan.lateral}, 0.0, plan.curvature, speed * step_time(t)));
  }
  return wps;
}

double mean_gap(const std::vector<Point2> & a, const std::vector<Point2> & b)
{
  double sum = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    sum += distance(a[t], b[t]);
  }
  return sum / static_cast<double>(a.size());
}

/// Curvature of the arc concentric with `reference` but shifted by `shift` to the left.
double concentric_curvature(double reference, double shift)
{
  if (std::abs(reference) < kStraightEpsilon) {
    return reference;
  }
  return reference / (1.0 - reference * shift);
}

/**
 * Reference plan first, then lateral and curvature variants at growing
 * magnitude. Variants that leave the generation bound are pulled in.
 */
std::vector<CandidateTrajectory> build_candidates(
  const ArcPlan & reference, double road_curvature, double speed, int count, double bound,
  Rng & rng)
{
  const auto within_bound = [&](const std::vector<Point2> & wps) {
    return std::all_of(wps.begin(), wps.end(), [&](const Point2 & p) {
      return std::abs(centerline_offset(road_curvature, p)) <= bound;
    });
  };

  ArcPlan base = reference;
  std::vector<Point2> ref_wps = arc_waypoints(base, speed);
  for (int attempt = 0; attempt < 30 && !within_bound(ref_wps); ++attempt) {
    base.lateral *= 0.5;
    base.curvature = road_curvature + 0.5 * (base.curvature - road_curvature);
    ref_wps = arc_waypoints(base, speed);
  }
  std::vector<std::pair<double, std::vector<Point2>>> scored;
  scored.emplace_back(0.0, ref_wps);

  for (int i = 1; i < count; ++i) {
    const int pattern = (i - 1) % 4;
    const double level = static_cast<double>((i - 1) / 4 + 1);
    double d_shift = 0.0;
    double k_shift = 0.0;
    const double jitter = rng.uniform(0.7, 1.3);
    switch (pattern) {
      case 0: d_shift = level * kVariantLateralStep * jitter; break;
      case 1: d_shift = -level * kVariantLateralStep * jitter; break;
      case 2: k_shift = level * kVariantCurvatureStep * jitter; break;
      default: k_shift = -level * kVariantCurvatureStep * jitter; break;
    }
    std::vector<Point2> wps;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const ArcPlan plan{
        base.lateral + d_shift, concentric_curvature(base.curvature, d_shift) + k_shift};
      wps = arc_waypoints(plan, speed);
      if (within_bound(wps)) {
        break;
      }
      d_shift *= 0.5;
      k_shift *= 0.5;
    }
    scored.emplace_back(mean_gap(wps, ref_wps), std::move(wps));
  }

  std::stable_sort(scored.begin(), scored.end(), [](const auto & a, const auto & b) {
    return a.first < b.first;
  });
  for (std::size_t i = 1; i < scored.size(); ++i) {
    scored[i].first = std::max(scored[i].first, scored[i - 1].first + 1e-6);
  }

  double norm_sum = 0.0;
  for (const auto & s : scored) {
    norm_sum += std::exp(-s.first / kConfidenceTemperature);
  }
  std::vector<CandidateTrajectory> out;
  out.reserve(scored.size());
  for (auto & s : scored) {
    CandidateTrajectory traj;
    traj.headings = chord_headings(s.second, 0.0);
    traj.waypoints = std::move(s.second);
    traj.confidence = std::exp(-s.first / kConfidenceTemperature) / norm_sum;
    out.push_back(std::move(traj));
  }
  return out;
}

struct FrenetMotion
{
  double s0;
  double d0;
  double vs;
  double vd;
};

std::vector<Pose2> frenet_track(const Road & road, const FrenetMotion & m)
{
  std::vector<Pose2> poses;
  poses.reserve(kFutureSteps);
  const double rel = (m.vs == 0.0 && m.vd == 0.0) ? 0.0 : std::atan2(m.vd, m.vs);
  for (std::size_t t = 0; t < kFutureSteps; ++t) {
    const double s = m.s0 + m.vs * step_time(t);
    const double d = m.d0 + m.vd * step_time(t);
    poses.emplace_back(road.at(s, d), road.heading(s) + rel);
  }
  return poses;
}

std::vector<OrientedBox> boxes_along(const std::vector<Pose2> & poses, const VehicleDims & dims)
{
  std::vector<OrientedBox> boxes;
  boxes.reserve(poses.size());
  for (const auto & p : poses) {
    boxes.emplace_back(p.position(), p.heading(), dims.length, dims.width);
  }
  return boxes;
}

}  // namespace

double centerline_offset(double curvature, const Point2 & p)
{
  if (std::abs(curvature) < kStraightEpsilon) {
    return p.y;
  }
  const double r = distance(p, {0.0, 1.0 / curvature});
  return 1.0 / curvature - (curvature > 0.0 ? r : -r);
}

void validate_params(const GeneratorParams & p)
{
  const auto fail = [](const std::string & what) {
    throw std::invalid_argument("GeneratorParams: " + what);
  };
  if (!(p.noise_scale >= 0.0) || !std::isfinite(p.noise_scale)) fail("noise_scale must be >= 0");
  if (p.n_agents < 0) fail("n_agents must be >= 0");
  if (p.n_candidates < 1) fail("n_candidates must be >= 1");
  if (!(p.curvature_range[0] > 0.0) || !(p.curvature_range[0] <= p.curvature_range[1])) {
    fail("curvature_range must satisfy 0 < lo <= hi");
  }
  if (!(p.speed_range[0] > 0.0) || !(p.speed_range[0] <= p.speed_range[1])) {
    fail("speed_range must satisfy 0 < lo <= hi");
  }
  if (!(p.corridor_half_width > 0.0)) fail("corridor_half_width must be > 0");
  if (!(p.ego_dims.length > 0.0) || !(p.ego_dims.width > 0.0)) fail("ego_dims must be > 0");
  if (p.points_per_element < 2) fail("points_per_element must be >= 2");
  if (p.curvature_range[1] * (p.corridor_half_width + 1.0) >= 1.0) {
    fail("curvature_range too tight for the corridor width");
  }
}

void validate_scenario(const Scenario & s)
{
  const auto fail = [&s](const std::string & what) {
    throw InvariantError("scenario " + s.id + ": " + what);
  };
  if (s.ego_gt_future.size() != kFutureSteps) fail("ego_gt_future must have 6 steps");
  if (!(s.ego_dims.length > 0.0) || !(s.ego_dims.width > 0.0)) fail("ego_dims must be positive");
  for (const Command c : kAllCommands) {
    const auto it = s.candidates.per_command().find(c);
    if (it == s.candidates.per_command().end() || it->second.empty()) {
      fail("missing candidates for " + std::string(to_string(c)));
    }
    for (const auto & traj : it->second) {
      if (traj.size() != kFutureSteps || traj.headings.size() != kFutureSteps) {
        fail("candidate off the 6-step grid");
      }
    }
  }
  if (s.agent_gt.size() != s.agents.size()) fail("agent_gt and agents differ in count");
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    try {
      validate_agent(s.agents[a]);
    } catch (const std::invalid_argument & e) {
      fail(e.what());
    }
    if (s.agents[a].modes.front().trajectory.size() != kFutureSteps) {
      fail("agent " + s.agents[a].id + " off the 6-step grid");
    }
    if (s.agent_gt[a].size() != kFutureSteps) {
      fail("agent_gt for " + s.agents[a].id + " off the 6-step grid");
    }
  }
  if (classify_future(s.ego_gt_future) != s.scenario_class) {
    fail("scenario_class disagrees with the ego future heading change");
  }
}

GroundTruth ground_truth(const Scenario & s)
{
  return GroundTruth{s.ego_gt_future, s.agent_gt, s.map.drivable_area()};
}

Scenario generate_scenario(RoadKind kind, const GeneratorParams & params, std::uint64_t seed)
{
  validate_params(params);
  Rng road_rng(seed ^ kRoadStream);
  Rng planner_rng(seed ^ kPlannerStream);
  Rng agent_rng(seed ^ kAgentStream);

  const double w = params.corridor_half_width;
  const double speed = road_rng.uniform(params.speed_range[0], params.speed_range[1]);
  const double horizon_s = speed * step_time(kFutureSteps - 1);

  double curvature = 0.0;
  if (kind == RoadKind::Turn) {
    // Enough curvature that the ego future turns by at least 20 degrees.
    const double min_turn = (20.0 * std::numbers::pi / 180.0) / (speed * (step_time(kFutureSteps - 1) - step_time(0)));
    double magnitude = road_rng.uniform(params.curvature_range[0], params.curvature_range[1]);
    magnitude = std::max(magnitude, min_turn);
    if (magnitude * (w + 1.0) >= 1.0) {
      throw std::invalid_argument("generate_scenario: speed too low for a turn in this corridor");
    }
    curvature = road_rng.bernoulli(0.5) ? magnitude : -magnitude;
  }
  const Road road{curvature};

  // Map extent, kept below a full circle.
  const double s_begin = -8.0;
  double s_end = horizon_s + 12.0;
  if (std::abs(curvature) * (s_end - s_begin) > 1.8 * std::numbers::pi) {
    s_end = s_begin + 1.8 * std::numbers::pi / std::abs(curvature);
  }

  Scenario sc;
  sc.id = "scenario-" + std::to_string(seed);
  sc.seed = seed;
  sc.ego_pose = Pose2({0.0, 0.0}, 0.0);
  sc.ego_dims = params.ego_dims;
  sc.command = curvature > 0.0   ? Command::TurnLeft
               : curvature < 0.0 ? Command::TurnRight
                                 : Command::GoStraight;

  // Ground truth: the ego follows the centreline at constant speed.
  for (std::size_t t = 0; t < kFutureSteps; ++t) {
    const double s = speed * step_time(t);
    sc.ego_gt_future.emplace_back(arc_point({0.0, 0.0}, 0.0, curvature, s), road.heading(s));
  }
  sc.scenario_class = classify_future(sc.ego_gt_future);

  // Drivable area: the corridor polygon, counterclockwise.
  std::vector<Point2> ring = sample_edge(road, -w, s_begin, s_end, kDrivableAreaSamples);
  std::vector<Point2> left = sample_edge(road, w, s_begin, s_end, kDrivableAreaSamples);
  ring.insert(ring.end(), left.rbegin(), left.rend());
  ring.push_back(ring.front());
  MultiPolygon da({Polygon(std::move(ring))});

  const std::size_t np = params.points_per_element;
  std::vector<MapElement> elements{
    {exact_element(sample_edge(road, -w, s_begin + 3.0, s_end, np)), MapElementKind::Boundary},
    {exact_element(sample_edge(road, w, s_begin + 3.0, s_end, np)), MapElementKind::Boundary},
    {exact_element(sample_edge(road, 0.0, s_begin + 3.0, s_end, np)), MapElementKind::LaneDivider},
  };
  sc.map = perturb_map(
    UncertainMap(std::move(elements), std::move(da)), params.noise_scale, seed ^ kMapStream,
    ScaleMode::Calibrated);

  // Planner reference with map-noise driven errors.
  const double noise = params.noise_scale;
  const double bound = 4.0 * w;
  double lateral_bias = planner_rng.laplace(kLateralBiasPerNoise * noise);
  lateral_bias = std::clamp(lateral_bias, -1.5 * w, 1.5 * w);
  const double rel_bias = planner_rng.laplace(kRelativeCurvatureBiasPerNoise * noise);
  const double abs_bias = planner_rng.laplace(kAbsoluteCurvatureBiasPerNoise * noise);
  const ArcPlan reference{
    lateral_bias, concentric_curvature(curvature, lateral_bias) * (1.0 + rel_bias) + abs_bias};

  std::map<Command, std::vector<CandidateTrajectory>> per_command;
  for (const Command c : kAllCommands) {
    if (c == sc.command) {
      per_command[c] =
        build_candidates(reference, curvature, speed, params.n_candidates, bound, planner_rng);
      continue;
    }
    const double k = c == Command::TurnLeft ? 0.06 : c == Command::TurnRight ? -0.06 : 0.0;
    per_command[c] = build_candidates({0.0, k}, curvature, speed, 3, bound, planner_rng);
  }
  sc.candidates = CandidateSet(std::move(per_command));

  // Agents: parked or slow vehicles at the corridor edge and crossing pedestrians.
  const std::vector<OrientedBox> ego_boxes = boxes_along(sc.ego_gt_future, sc.ego_dims);
  for (int a = 0; a < params.n_agents; ++a) {
    for (int attempt = 0; attempt < 40; ++attempt) {
      const bool vehicle = agent_rng.bernoulli(0.6);
      const double side = agent_rng.bernoulli(0.5) ? 1.0 : -1.0;
      const VehicleDims dims = vehicle ? VehicleDims{4.5, 1.9} : VehicleDims{0.8, 0.8};
      FrenetMotion truth{};
      if (vehicle) {
        truth.s0 = agent_rng.uniform(6.0, horizon_s + 4.0);
        truth.d0 = side * (w + agent_rng.uniform(-0.3, 1.5));
        truth.vs = agent_rng.bernoulli(0.5) ? 0.0 : agent_rng.uniform(0.0, 0.7 * speed);
        truth.vd = 0.0;
      } else {
        truth.s0 = agent_rng.uniform(8.0, horizon_s + 4.0);
        truth.d0 = side * (w + agent_rng.uniform(0.5, 3.0));
        truth.vs = 0.0;
        truth.vd = -side * agent_rng.uniform(0.8, 1.6);
      }
      const std::vector<Pose2> true_track = frenet_track(road, truth);
      const std::vector<OrientedBox> true_boxes = boxes_along(true_track, dims);
      bool hits_ego = false;
      for (std::size_t t = 0; t < kFutureSteps && !hits_ego; ++t) {
        hits_ego = boxes_overlap(ego_boxes[t], true_boxes[t]);
      }
      if (hits_ego) {
        continue;
      }

      // Mode 0 is the true motion; alternates stop in place or move faster.
      const int n_modes = agent_rng.uniform_int(1, 3);
      std::vector<std::vector<Pose2>> tracks{true_track};
      if (n_modes >= 2) {
        tracks.push_back(frenet_track(road, {truth.s0, truth.d0, 0.0, 0.0}));
      }
      if (n_modes >= 3) {
        tracks.push_back(frenet_track(road, {truth.s0, truth.d0, 1.5 * truth.vs, 1.5 * truth.vd}));
      }
      std::vector<double> conf(tracks.size(), 1.0);
      if (tracks.size() > 1) {
        const std::size_t top = agent_rng.bernoulli(0.8)
                                  ? 0
                                  : static_cast<std::size_t>(agent_rng.uniform_int(1, n_modes - 1));
        const double top_conf = agent_rng.uniform(0.5, 0.7);
        const double rest = (0.95 - top_conf) / static_cast<double>(tracks.size() - 1);
        for (std::size_t m = 0; m < tracks.size(); ++m) {
          conf[m] = m == top ? top_conf : rest;
        }
      }
      AgentPrediction pred;
      pred.id = "agent-" + std::to_string(a);
      pred.dims = dims;
      for (std::size_t m = 0; m < tracks.size(); ++m) {
        pred.modes.push_back({std::move(tracks[m]), conf[m]});
      }
      sc.agents.push_back(std::move(pred));
      sc.agent_gt.push_back(true_boxes);
      break;
    }
  }

  validate_scenario(sc);
  return sc;
}

}  // namespace uncad
