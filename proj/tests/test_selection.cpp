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

#include "uncad/random.hpp"
#include "uncad/selection.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace uncad
{
namespace
{

CandidateTrajectory straight_line(double y, double confidence, double step = 2.0)
{
  CandidateTrajectory t;
  for (std::size_t i = 0; i < kFutureSteps; ++i) {
    t.waypoints.push_back({step * static_cast<double>(i + 1), y});
    t.headings.push_back(0.0);
  }
  t.confidence = confidence;
  return t;
}

CandidateSet set_for(Command command, std::vector<CandidateTrajectory> cands)
{
  std::map<Command, std::vector<CandidateTrajectory>> m;
  for (auto c : kAllCommands) m[c] = {straight_line(0.0, 0.5)};
  m[command] = std::move(cands);
  return CandidateSet(std::move(m));
}

UncertainPolyline boundary_at(double y, double b, int n = 20, double x0 = -5.0, double dx = 1.0)
{
  std::vector<LaplacePoint> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(Point2{x0 + dx * i, y}, b, b);
  return UncertainPolyline(std::move(pts));
}

MultiPolygon big_area()
{
  return MultiPolygon({Polygon({{-100, -100}, {100, -100}, {100, 100}, {-100, 100}, {-100, -100}})});
}

UncertainMap map_with(std::vector<UncertainPolyline> boundaries)
{
  std::vector<MapElement> els;
  for (auto & b : boundaries) els.push_back({std::move(b), MapElementKind::Boundary});
  return UncertainMap(std::move(els), big_area());
}

AgentPrediction parked_agent(const Point2 & at, double length = 2.0, double width = 2.0)
{
  AgentPrediction a;
  a.id = "a";
  a.dims = {length, width};
  AgentMode m;
  for (std::size_t t = 0; t < kFutureSteps; ++t) m.trajectory.emplace_back(at, 0.0);
  m.confidence = 0.9;
  a.modes.push_back(m);
  return a;
}

TEST(CommandFilter, ReturnsCommandSubset)
{
  std::map<Command, std::vector<CandidateTrajectory>> m;
  m[Command::TurnLeft] = {straight_line(1, 0.1)};
  m[Command::TurnRight] = {straight_line(2, 0.1)};
  m[Command::GoStraight] = {straight_line(3, 0.1), straight_line(4, 0.2), straight_line(5, 0.3)};
  const CandidateSet set(m);
  EXPECT_EQ(command_filter(set, Command::GoStraight), m[Command::GoStraight]);
  EXPECT_EQ(command_filter(set, Command::TurnLeft).size(), 1u);

  m.erase(Command::TurnRight);
  EXPECT_THROW(CandidateSet{m}, std::invalid_argument);
}

TEST(TrajectoryRisk, Examples)
{
  const auto traj = straight_line(0.0, 1.0);
  const std::vector<UncertainPolyline> on{boundary_at(0.0, 0.5, 1, 4.0)};
  EXPECT_DOUBLE_EQ(trajectory_risk(traj, on, RiskAggregator::Min), 0.0);

  const std::vector<UncertainPolyline> far{boundary_at(50.0, 1.0), boundary_at(-60.0, 0.5)};
  EXPECT_GT(trajectory_risk(traj, far, RiskAggregator::Min), 2.0);

  EXPECT_THROW(trajectory_risk(traj, std::vector<UncertainPolyline>{}, RiskAggregator::Min), std::invalid_argument);
}

TEST(TrajectoryRisk, MatchesExhaustiveLoopAndMean)
{
  Rng rng(31);
  for (int i = 0; i < 300; ++i) {
    auto traj = straight_line(rng.uniform(-3, 3), 1.0);
    for (auto & w : traj.waypoints) w = w + Point2{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    std::vector<UncertainPolyline> bs;
    const int nb = rng.uniform_int(1, 4);
    for (int k = 0; k < nb; ++k) bs.push_back(boundary_at(rng.uniform(-6, 6), rng.uniform(0.1, 2), rng.uniform_int(1, 25)));
    double lo = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (const auto & w : traj.waypoints) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto & b : bs) {
        for (const auto & lp : b.points()) best = std::min(best, laplace_point_nll(w, lp));
      }
      lo = std::min(lo, best);
      sum += best;
    }
    EXPECT_NEAR(trajectory_risk(traj, bs, RiskAggregator::Min), lo, 1e-12);
    EXPECT_NEAR(trajectory_risk(traj, bs, RiskAggregator::Mean), sum / 6.0, 1e-12);
  }
}

TEST(TrajectoryRisk, MinNeverIncreasesWithMorePoints)
{
  Rng rng(32);
  const auto traj = straight_line(0.5, 1.0);
  std::vector<UncertainPolyline> bs{boundary_at(3.0, 0.5, 5)};
  double prev = trajectory_risk(traj, bs, RiskAggregator::Min);
  for (int i = 0; i < 50; ++i) {
    auto pts = bs.back().points();
    pts.emplace_back(Point2{rng.uniform(-5, 15), rng.uniform(-5, 5)}, rng.uniform(0.1, 1), rng.uniform(0.1, 1));
    bs.back() = UncertainPolyline(pts);
    const double now = trajectory_risk(traj, bs, RiskAggregator::Min);
    EXPECT_LE(now, prev);
    prev = now;
  }
}

TEST(AgentCollision, Examples)
{
  const auto traj = straight_line(0.0, 1.0);
  const VehicleDims ego{4.0, 2.0};
  EXPECT_FALSE(agent_collision_check(traj, ego, {}));

  const std::vector<AgentPrediction> on_wp3{parked_agent(traj.waypoints[3])};
  EXPECT_TRUE(agent_collision_check(traj, ego, on_wp3));

  // Crosses waypoint 3's location, but only at timestep 5.
  AgentPrediction passer = parked_agent({100, 100});
  for (std::size_t t = 0; t < kFutureSteps; ++t) {
    const double y = -15.0 + 3.0 * static_cast<double>(t);
    passer.modes[0].trajectory[t] = Pose2({traj.waypoints[3].x, y}, 1.5707963);
  }
  ASSERT_EQ(passer.modes[0].trajectory[5].position().y, 0.0);
  EXPECT_FALSE(agent_collision_check(traj, ego, std::vector<AgentPrediction>{passer}));

  AgentPrediction short_agent = parked_agent({0, 0});
  short_agent.modes[0].trajectory.pop_back();
  EXPECT_THROW(agent_collision_check(traj, ego, std::vector<AgentPrediction>{short_agent}), std::invalid_argument);
}

TEST(AgentCollision, MarginAndModes)
{
  const auto traj = straight_line(0.0, 1.0);
  const VehicleDims ego{4.0, 2.0};
  // Gap of 0.5 m to the ego's left side.
  const std::vector<AgentPrediction> near{parked_agent({6.0, 2.5})};
  EXPECT_FALSE(agent_collision_check(traj, ego, near, 0.0));
  EXPECT_TRUE(agent_collision_check(traj, ego, near, 0.6));

  AgentPrediction two = parked_agent({6.0, 30.0});
  AgentMode second = two.modes[0];
  second.confidence = 0.05;
  for (auto & p : second.trajectory) p = Pose2({6.0, 0.0}, 0.0);
  two.modes.push_back(second);
  const std::vector<AgentPrediction> agents{two};
  EXPECT_FALSE(agent_collision_check(traj, ego, agents, 0.0, false));
  EXPECT_TRUE(agent_collision_check(traj, ego, agents, 0.0, true));
}

TEST(BoundaryCollision, Examples)
{
  const VehicleDims ego{4.0, 2.0};
  const std::vector<Polyline> five{Polyline({{-10, 5}, {30, 5}})};
  EXPECT_FALSE(boundary_collision_check(straight_line(0.0, 1.0), ego, five, 0.3));

  // Front-left corner of waypoint 0 sits at (4, 1).
  const std::vector<Polyline> touching{Polyline({{4, 1}, {4, 10}})};
  const auto traj = straight_line(0.0, 1.0);
  EXPECT_TRUE(boundary_collision_check(traj, ego, touching, 0.3));
  EXPECT_FALSE(boundary_collision_check(traj, ego, touching, 0.0));

  const std::vector<Polyline> close{Polyline({{-10, 1.2}, {30, 1.2}})};
  EXPECT_TRUE(boundary_collision_check(traj, ego, close, 0.3));
  EXPECT_FALSE(boundary_collision_check(traj, ego, close, 0.0));

  EXPECT_THROW(boundary_collision_check(traj, ego, std::vector<Polyline>{}, 0.3), std::invalid_argument);
}

TEST(UcasSelect, SingleCandidateFarFromEverything)
{
  const auto set = set_for(Command::GoStraight, {straight_line(0.0, 0.7)});
  const auto map = map_with({boundary_at(40.0, 0.5), boundary_at(-40.0, 0.5)});
  const auto rep = ucas_select(set, Command::GoStraight, map, {}, {4, 2}, SelectionConfig{});
  EXPECT_EQ(rep.chosen_index, 0u);
  EXPECT_FALSE(rep.fallback_used);
  EXPECT_EQ(rep.chosen, set.per_command().at(Command::GoStraight)[0]);
}

TEST(UcasSelect, UncertainRegionZeroesCandidate)
{
  const auto set = set_for(Command::GoStraight, {straight_line(6.0, 0.5), straight_line(0.0, 0.5)});
  // Sits on the first candidate's path, far from the second.
  const auto map = map_with({boundary_at(6.2, 0.5, 20, 0.0), boundary_at(-40.0, 0.5)});
  SelectionConfig cfg;
  cfg.enable_boundary_filter = false;
  const auto rep = ucas_select(set, Command::GoStraight, map, {}, {4, 2}, cfg);
  EXPECT_LT(rep.candidates[0].risk_nll, cfg.nll_threshold);
  EXPECT_EQ(rep.chosen_index, 1u);
  EXPECT_FALSE(rep.fallback_used);
}

TEST(UcasSelect, AllAgentCollidingFallsBackToConfidence)
{
  const auto set = set_for(Command::GoStraight, {straight_line(0.0, 0.2), straight_line(0.5, 0.6), straight_line(-0.5, 0.2)});
  const auto map = map_with({boundary_at(40.0, 0.5)});
  const std::vector<AgentPrediction> agents{parked_agent({6.0, 0.0}, 3.0, 4.0)};
  const auto rep = ucas_select(set, Command::GoStraight, map, agents, {4, 2}, SelectionConfig{});
  EXPECT_TRUE(rep.fallback_used);
  EXPECT_EQ(rep.chosen_index, 1u);
}

TEST(UcasSelect, NoFiltersIsArgmaxConfidence)
{
  const auto set = set_for(Command::GoStraight, {straight_line(0.0, 0.2), straight_line(0.5, 0.6), straight_line(-0.5, 0.6)});
  const auto map = map_with({boundary_at(0.0, 0.5)});
  SelectionConfig cfg;
  cfg.enable_uncertainty_filter = false;
  cfg.enable_agent_filter = false;
  cfg.enable_boundary_filter = false;
  const std::vector<AgentPrediction> agents{parked_agent({6.0, 0.0})};
  const auto rep = ucas_select(set, Command::GoStraight, map, agents, {4, 2}, cfg);
  EXPECT_EQ(rep.chosen_index, 1u);
  EXPECT_FALSE(rep.fallback_used);
}

TEST(UcasSelect, RequiresBoundariesForBoundaryFilters)
{
  const auto set = set_for(Command::GoStraight, {straight_line(0.0, 0.5)});
  const UncertainMap empty({}, big_area());
  EXPECT_THROW(ucas_select(set, Command::GoStraight, empty, {}, {4, 2}, SelectionConfig{}), std::invalid_argument);
  SelectionConfig agents_only;
  agents_only.enable_uncertainty_filter = false;
  agents_only.enable_boundary_filter = false;
  EXPECT_NO_THROW(ucas_select(set, Command::GoStraight, empty, {}, {4, 2}, agents_only));
}

TEST(ValidateConfig, RejectsBadValues)
{
  SelectionConfig cfg;
  cfg.boundary_clearance = -0.1;
  EXPECT_THROW(validate_config(cfg), std::invalid_argument);
  cfg = {};
  cfg.agent_margin = -1;
  EXPECT_THROW(validate_config(cfg), std::invalid_argument);
  cfg = {};
  cfg.nll_threshold = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(validate_config(cfg), std::invalid_argument);
}

std::vector<CandidateRecord> random_records(Rng & rng)
{
  std::vector<CandidateRecord> recs(static_cast<std::size_t>(rng.uniform_int(1, 8)));
  for (auto & r : recs) {
    r.confidence = rng.uniform_int(0, 4) * 0.25;
    r.risk_nll = rng.uniform_int(0, 8) * 0.5;
    r.agent_collision = rng.bernoulli(0.3);
    r.boundary_collision = rng.bernoulli(0.3);
  }
  return recs;
}

SelectionConfig random_config(Rng & rng)
{
  SelectionConfig cfg;
  cfg.enable_uncertainty_filter = rng.bernoulli(0.5);
  cfg.enable_agent_filter = rng.bernoulli(0.5);
  cfg.enable_boundary_filter = rng.bernoulli(0.5);
  return cfg;
}

TEST(Decide, FilterMonotonicity)
{
  Rng rng(41);
  for (int i = 0; i < 5000; ++i) {
    const auto base = random_records(rng);
    const auto cfg = random_config(rng);
    auto less = base;
    decide(less, cfg);
    for (int f = 0; f < 3; ++f) {
      auto more_cfg = cfg;
      if (f == 0) more_cfg.enable_uncertainty_filter = true;
      if (f == 1) more_cfg.enable_agent_filter = true;
      if (f == 2) more_cfg.enable_boundary_filter = true;
      auto more = base;
      decide(more, more_cfg);
      for (std::size_t k = 0; k < base.size(); ++k) EXPECT_LE(more[k].final_score, less[k].final_score);
    }
  }
}

TEST(Decide, RescalingInvariance)
{
  Rng rng(42);
  for (int i = 0; i < 5000; ++i) {
    const auto base = random_records(rng);
    const auto cfg = random_config(rng);
    auto a = base;
    const auto da = decide(a, cfg);
    const double s = rng.uniform(0.01, 100.0);
    auto b = base;
    for (auto & r : b) r.confidence *= s;
    const auto db = decide(b, cfg);
    EXPECT_EQ(da.index, db.index);
    EXPECT_EQ(da.fallback_used, db.fallback_used);
  }
}

TEST(Decide, NeverPicksAgentCollisionUnlessAllCollide)
{
  Rng rng(43);
  for (int i = 0; i < 5000; ++i) {
    auto recs = random_records(rng);
    auto cfg = random_config(rng);
    cfg.enable_agent_filter = true;
    const auto d = decide(recs, cfg);
    if (recs[d.index].agent_collision) {
      EXPECT_TRUE(d.fallback_used);
      EXPECT_TRUE(std::all_of(recs.begin(), recs.end(), [](const auto & r) { return r.agent_collision; }));
    }
  }
}

TEST(Decide, DisabledFiltersMatchOneLineArgmax)
{
  Rng rng(44);
  SelectionConfig cfg;
  cfg.enable_uncertainty_filter = false;
  cfg.enable_agent_filter = false;
  cfg.enable_boundary_filter = false;
  for (int i = 0; i < 5000; ++i) {
    auto recs = random_records(rng);
    for (auto & r : recs) r.confidence = 0.05 + r.confidence;
    const auto d = decide(recs, cfg);
    const auto it = std::max_element(recs.begin(), recs.end(), [](const auto & x, const auto & y) { return x.confidence < y.confidence; });
    EXPECT_EQ(d.index, static_cast<std::size_t>(it - recs.begin()));
    EXPECT_FALSE(d.fallback_used);
  }
}

TEST(UcasSelect, DeterministicOnRandomScenes)
{
  Rng rng(45);
  for (int i = 0; i < 200; ++i) {
    std::vector<CandidateTrajectory> cands;
    const int n = rng.uniform_int(1, 6);
    for (int k = 0; k < n; ++k) cands.push_back(straight_line(rng.uniform(-3, 3), rng.uniform(0.01, 1)));
    const auto set = set_for(Command::TurnLeft, cands);
    const auto map = map_with({boundary_at(rng.uniform(2, 4), 0.5, 20, -5, 1.5), boundary_at(rng.uniform(-4, -2), 0.5, 20, -5, 1.5)});
    const std::vector<AgentPrediction> agents{parked_agent({rng.uniform(0, 12), rng.uniform(-4, 4)})};
    const auto cfg = random_config(rng);
    const auto a = ucas_select(set, Command::TurnLeft, map, agents, {4, 2}, cfg);
    const auto b = ucas_select(set, Command::TurnLeft, map, agents, {4, 2}, cfg);
    EXPECT_EQ(a, b);
  }
}

}  // namespace
}  // namespace uncad
