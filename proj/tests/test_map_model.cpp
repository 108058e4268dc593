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

#include "uncad/map_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace uncad
{
namespace
{

MultiPolygon box_area()
{
  return MultiPolygon({Polygon({{-10, -10}, {10, -10}, {10, 10}, {-10, 10}, {-10, -10}})});
}

MapElement line_element(double y, MapElementKind kind, int n = 20)
{
  std::vector<LaplacePoint> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(Point2{static_cast<double>(i), y}, 0.2, 0.3);
  return {UncertainPolyline(std::move(pts)), kind};
}

TEST(BoundaryElements, SelectsBoundariesInOrder)
{
  std::vector<MapElement> els{
    line_element(0, MapElementKind::LaneDivider), line_element(1, MapElementKind::Boundary),
    line_element(2, MapElementKind::LaneDivider), line_element(3, MapElementKind::Boundary),
    line_element(4, MapElementKind::PedCrossing)};
  const UncertainMap map(els, box_area());
  const auto b = boundary_elements(map);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0], els[1].geometry);
  EXPECT_EQ(b[1], els[3].geometry);
  EXPECT_EQ(all_elements(map).size(), 5u);
}

TEST(BoundaryElements, EmptyAndFull)
{
  const UncertainMap none({line_element(0, MapElementKind::LaneDivider)}, box_area());
  EXPECT_TRUE(boundary_elements(none).empty());

  std::vector<MapElement> many;
  for (int i = 0; i < 100; ++i) many.push_back(line_element(i * 0.1, MapElementKind::Boundary));
  const UncertainMap full(many, box_area());
  EXPECT_EQ(boundary_elements(full).size(), 100u);

  many.push_back(line_element(-1, MapElementKind::Boundary));
  EXPECT_THROW(UncertainMap(many, box_area()), std::invalid_argument);
}

TEST(UncertainMap, RejectsMixedPointCounts)
{
  EXPECT_THROW(
    UncertainMap(
      {line_element(0, MapElementKind::Boundary), line_element(1, MapElementKind::Boundary, 10)},
      box_area()),
    std::invalid_argument);
}

TEST(MapElementKind, Names)
{
  for (auto k : {MapElementKind::Boundary, MapElementKind::LaneDivider, MapElementKind::PedCrossing}) {
    EXPECT_EQ(map_element_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(map_element_kind_from_string("road").has_value());
}

TEST(PerturbMap, ZeroNoise)
{
  const UncertainMap map({line_element(0, MapElementKind::Boundary)}, box_area());
  const auto out = perturb_map(map, 0.0, 1, ScaleMode::Calibrated);
  for (std::size_t i = 0; i < out.elements()[0].geometry.size(); ++i) {
    const auto & lp = out.elements()[0].geometry.points()[i];
    EXPECT_EQ(lp.mu(), map.elements()[0].geometry.points()[i].mu());
    EXPECT_EQ(lp.b()[0], kMinLaplaceScale);
    EXPECT_EQ(lp.b()[1], kMinLaplaceScale);
  }
  const auto fixed = perturb_map(map, 0.0, 1, ScaleMode::Fixed);
  EXPECT_EQ(fixed, map);
}

TEST(PerturbMap, DeterministicAndStructurePreserving)
{
  const UncertainMap map(
    {line_element(0, MapElementKind::Boundary), line_element(2, MapElementKind::LaneDivider),
     line_element(4, MapElementKind::PedCrossing)},
    box_area());
  const auto a = perturb_map(map, 0.5, 99);
  const auto b = perturb_map(map, 0.5, 99);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, perturb_map(map, 0.5, 100));
  ASSERT_EQ(a.elements().size(), map.elements().size());
  for (std::size_t e = 0; e < a.elements().size(); ++e) {
    EXPECT_EQ(a.elements()[e].kind, map.elements()[e].kind);
    EXPECT_EQ(a.elements()[e].geometry.size(), map.elements()[e].geometry.size());
    for (const auto & lp : a.elements()[e].geometry.points()) {
      EXPECT_EQ(lp.b()[0], 0.5);
      EXPECT_EQ(lp.b()[1], 0.5);
    }
  }
  EXPECT_EQ(a.drivable_area(), map.drivable_area());

  const auto kept = perturb_map(map, 0.5, 99, ScaleMode::Fixed);
  EXPECT_EQ(kept.elements()[0].geometry.points()[0].b(), (std::array<double, 2>{0.2, 0.3}));

  EXPECT_THROW(perturb_map(map, -0.1, 1), std::invalid_argument);
}

TEST(PerturbMap, MeanAbsoluteDisplacementMatchesScale)
{
  std::vector<MapElement> els;
  for (int e = 0; e < 100; ++e) els.push_back(line_element(e, MapElementKind::Boundary, 100));
  const UncertainMap map(els, box_area());
  const auto out = perturb_map(map, 0.5, 2024);
  double sum = 0.0;
  int n = 0;
  for (std::size_t e = 0; e < els.size(); ++e) {
    for (std::size_t i = 0; i < 100; ++i) {
      sum += std::abs(out.elements()[e].geometry.points()[i].mu().x - map.elements()[e].geometry.points()[i].mu().x);
      ++n;
    }
  }
  ASSERT_EQ(n, 10000);
  const double mean = sum / n;
  EXPECT_GE(mean, 0.45);
  EXPECT_LE(mean, 0.55);
}

TEST(PerturbMap, MleRecoversCalibratedNoise)
{
  const UncertainMap map({line_element(0, MapElementKind::Boundary, 1)}, box_area());
  const Point2 truth = map.elements()[0].geometry.points()[0].mu();
  const int k = 400;
  const double noise = 0.5;
  std::vector<Point2> obs;
  for (int i = 0; i < k; ++i) {
    obs.push_back(perturb_map(map, noise, 7000 + static_cast<std::uint64_t>(i)).elements()[0].geometry.points()[0].mu());
  }
  const auto fit = fit_laplace_mle(obs);
  const double tol = 3 * noise / std::sqrt(static_cast<double>(k));
  EXPECT_NEAR(fit.mu().x, truth.x, tol);
  EXPECT_NEAR(fit.mu().y, truth.y, tol);
  EXPECT_NEAR(fit.b()[0], noise, 0.15 * noise);
  EXPECT_NEAR(fit.b()[1], noise, 0.15 * noise);
}

TEST(WithUniformScale, ReplacesEveryScale)
{
  const UncertainMap map({line_element(0, MapElementKind::Boundary)}, box_area());
  const auto out = with_uniform_scale(map, 1.0);
  for (const auto & lp : out.elements()[0].geometry.points()) {
    EXPECT_EQ(lp.b(), (std::array<double, 2>{1.0, 1.0}));
  }
}

}  // namespace
}  // namespace uncad
