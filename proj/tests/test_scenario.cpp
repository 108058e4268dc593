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

#include "uncad/errors.hpp"
#include "uncad/metrics.hpp"
#include "uncad/scenario.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace uncad
{
namespace
{

// Curvature of the road arc, which passes through the origin tangent to +x.
double road_curvature(const Scenario & s)
{
  const Pose2 & last = s.ego_gt_future.back();
  if (last.heading() == 0.0) return 0.0;
  return 2.0 * std::sin(last.heading() / 2.0) / std::hypot(last.position().x, last.position().y);
}

TEST(GenerateScenario, NoiselessStraightSingleCandidateFollowsCentre)
{
  GeneratorParams p;
  p.noise_scale = 0.0;
  p.n_candidates = 1;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = generate_scenario(RoadKind::Straight, p, seed);
    const auto & cands = s.candidates.per_command().at(s.command);
    ASSERT_EQ(cands.size(), 1u);
    ASSERT_EQ(cands[0].size(), s.ego_gt_future.size());
    for (std::size_t t = 0; t < cands[0].size(); ++t) {
      EXPECT_NEAR(cands[0].waypoints[t].x, s.ego_gt_future[t].position().x, 1e-12);
      EXPECT_NEAR(cands[0].waypoints[t].y, s.ego_gt_future[t].position().y, 1e-12);
    }
    EXPECT_EQ(dacr_frame(cands[0], s.ego_dims, s.map.drivable_area(), kFutureSteps), 0.0);
    EXPECT_EQ(s.scenario_class, ScenarioClass::Straight);
  }
}

TEST(GenerateScenario, DeterministicBytes)
{
  const GeneratorParams p;
  for (auto kind : {RoadKind::Straight, RoadKind::Turn}) {
    const auto a = serialize_scenario(generate_scenario(kind, p, 77));
    const auto b = serialize_scenario(generate_scenario(kind, p, 77));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, serialize_scenario(generate_scenario(kind, p, 78)));
  }
}

TEST(GenerateScenario, NarrowTurnHasOffsetCandidateLeavingArea)
{
  GeneratorParams p;
  p.corridor_half_width = 2.0;
  p.n_candidates = 9;
  const double needed = p.corridor_half_width - p.ego_dims.width / 2.0;
  int offset_candidates = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = generate_scenario(RoadKind::Turn, p, seed);
    EXPECT_EQ(s.scenario_class, ScenarioClass::Turn);
    const double k = road_curvature(s);
    for (const auto & c : s.candidates.per_command().at(s.command)) {
      double worst = 0.0;
      for (const auto & w : c.waypoints) worst = std::max(worst, std::abs(centerline_offset(k, w)));
      if (worst > needed + 1e-6) {
        ++offset_candidates;
        EXPECT_GT(dacr_frame(c, s.ego_dims, s.map.drivable_area(), kFutureSteps), 0.0);
      }
    }
  }
  EXPECT_GT(offset_candidates, 0);
}

TEST(GenerateScenario, CandidatesStayWithinBound)
{
  GeneratorParams p;
  p.n_candidates = 12;
  p.noise_scale = 1.5;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto kind = seed % 2 == 0 ? RoadKind::Turn : RoadKind::Straight;
    const auto s = generate_scenario(kind, p, seed);
    const double k = road_curvature(s);
    for (const auto & [cmd, cands] : s.candidates.per_command()) {
      for (const auto & c : cands) {
        for (const auto & w : c.waypoints) EXPECT_LE(std::abs(centerline_offset(k, w)), 4.0 * p.corridor_half_width + 1e-9);
      }
    }
  }
}

TEST(GenerateScenario, ConfidencesPositiveAndStrictlyDecreasing)
{
  GeneratorParams p;
  p.n_candidates = 10;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = generate_scenario(seed % 3 == 0 ? RoadKind::Straight : RoadKind::Turn, p, seed);
    for (const auto & [cmd, cands] : s.candidates.per_command()) {
      double sum = 0.0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        EXPECT_GT(cands[i].confidence, 0.0);
        if (i > 0) {
          EXPECT_LT(cands[i].confidence, cands[i - 1].confidence);
        }
        sum += cands[i].confidence;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
    EXPECT_EQ(s.candidates.per_command().at(s.command).size(), 10u);
  }
}

TEST(GenerateScenario, RejectsBadParams)
{
  GeneratorParams p;
  p.n_candidates = 0;
  EXPECT_THROW(generate_scenario(RoadKind::Straight, p, 1), std::invalid_argument);
  p = {};
  p.noise_scale = -1.0;
  EXPECT_THROW(generate_scenario(RoadKind::Straight, p, 1), std::invalid_argument);
  p = {};
  p.speed_range = {5.0, 4.0};
  EXPECT_THROW(generate_scenario(RoadKind::Turn, p, 1), std::invalid_argument);
}

TEST(ScenarioIo, RoundTrip)
{
  const GeneratorParams p;
  const auto dir = std::filesystem::temp_directory_path() / "uncad_scenario_io";
  std::filesystem::create_directories(dir);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto s = generate_scenario(seed % 2 ? RoadKind::Turn : RoadKind::Straight, p, seed);
    EXPECT_EQ(parse_scenario(serialize_scenario(s)), s);
    const auto path = dir / ("s" + std::to_string(seed) + ".json");
    save_scenario(s, path);
    EXPECT_EQ(load_scenario(path), s);
  }
  std::filesystem::remove_all(dir);
}

TEST(ScenarioIo, NegativeScaleNamesField)
{
  const auto s = generate_scenario(RoadKind::Straight, GeneratorParams{}, 5);
  auto doc = nlohmann::json::parse(serialize_scenario(s));
  doc["map"]["elements"][1]["points"][3][2] = -1.0;
  try {
    parse_scenario(doc.dump());
    FAIL() << "expected an invariant error";
  } catch (const InvariantError & e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("map.elements[1].points[3].b[0]"), std::string::npos) << msg;
  }
}

TEST(ScenarioIo, VersionAndSyntaxErrors)
{
  const auto s = generate_scenario(RoadKind::Straight, GeneratorParams{}, 6);
  auto doc = nlohmann::json::parse(serialize_scenario(s));
  auto missing = doc;
  missing.erase("version");
  EXPECT_THROW(parse_scenario(missing.dump()), VersionError);
  auto future = doc;
  future["version"] = 2;
  EXPECT_THROW(parse_scenario(future.dump()), VersionError);

  try {
    parse_scenario("{\n  \"version\": 1,\n  \"id\": \n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError & e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }

  auto no_command = doc;
  no_command.erase("command");
  EXPECT_THROW(parse_scenario(no_command.dump()), ParseError);

  EXPECT_THROW(load_scenario("/nonexistent/uncad/file.json"), IoError);
}

TEST(ValidateScenario, CatchesInconsistency)
{
  auto s = generate_scenario(RoadKind::Turn, GeneratorParams{}, 9);
  EXPECT_NO_THROW(validate_scenario(s));
  auto wrong_class = s;
  wrong_class.scenario_class = ScenarioClass::Straight;
  EXPECT_THROW(validate_scenario(wrong_class), InvariantError);
  auto short_future = s;
  short_future.ego_gt_future.pop_back();
  EXPECT_THROW(validate_scenario(short_future), InvariantError);
  auto mismatched = s;
  mismatched.agent_gt.emplace_back();
  EXPECT_THROW(validate_scenario(mismatched), InvariantError);
}

TEST(GroundTruth, MirrorsScenario)
{
  const auto s = generate_scenario(RoadKind::Turn, GeneratorParams{}, 10);
  const auto gt = ground_truth(s);
  EXPECT_EQ(gt.ego_future, s.ego_gt_future);
  EXPECT_EQ(gt.agent_futures, s.agent_gt);
  EXPECT_EQ(gt.drivable_area, s.map.drivable_area());
}

TEST(Manifest, RoundTrip)
{
  Manifest m;
  m.master_seed = 2024;
  m.turn_fraction = 0.65;
  m.params.noise_scale = 0.25;
  m.entries.push_back({"scn-0000", "scn-0000.json", ScenarioClass::Turn});
  m.entries.push_back({"scn-0001", "scn-0001.json", ScenarioClass::Straight});
  EXPECT_EQ(parse_manifest(serialize_manifest(m)), m);

  auto doc = nlohmann::json::parse(serialize_manifest(m));
  doc.erase("version");
  EXPECT_THROW(parse_manifest(doc.dump()), VersionError);
}

}  // namespace
}  // namespace uncad
