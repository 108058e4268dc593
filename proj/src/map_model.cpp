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

#include "uncad/random.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace uncad
{

std::string_view to_string(MapElementKind kind)
{
  switch (kind) {
    case MapElementKind::Boundary:
      return "boundary";
    case MapElementKind::LaneDivider:
      return "divider";
    case MapElementKind::PedCrossing:
      return "crossing";
  }
  return "unknown";
}

std::optional<MapElementKind> map_element_kind_from_string(std::string_view name)
{
  if (name == "boundary") return MapElementKind::Boundary;
  if (name == "divider") return MapElementKind::LaneDivider;
  if (name == "crossing") return MapElementKind::PedCrossing;
  return std::nullopt;
}

UncertainMap::UncertainMap(std::vector<MapElement> elements, MultiPolygon drivable_area)
: elements_(std::move(elements)), drivable_area_(std::move(drivable_area))
{
  if (elements_.size() > kMaxMapElements) {
    throw std::invalid_argument("UncertainMap: too many elements");
  }
  for (const auto & e : elements_) {
    if (e.geometry.size() != elements_.front().geometry.size()) {
      throw std::invalid_argument("UncertainMap: elements differ in point count");
    }
  }
}

std::vector<UncertainPolyline> boundary_elements(const UncertainMap & map)
{
  std::vector<UncertainPolyline> out;
  for (const auto & e : map.elements()) {
    if (e.kind == MapElementKind::Boundary) {
      out.push_back(e.geometry);
    }
  }
  return out;
}

std::vector<UncertainPolyline> all_elements(const UncertainMap & map)
{
  std::vector<UncertainPolyline> out;
  out.reserve(map.elements().size());
  for (const auto & e : map.elements()) {
    out.push_back(e.geometry);
  }
  return out;
}

UncertainMap perturb_map(
  const UncertainMap & map, double noise_scale, std::uint64_t seed, ScaleMode mode)
{
  if (!(noise_scale >= 0.0) || !std::isfinite(noise_scale)) {
    throw std::invalid_argument("perturb_map: noise_scale must be a finite value >= 0");
  }
  Rng rng(seed);
  std::vector<MapElement> elements;
  elements.reserve(map.elements().size());
  for (const auto & e : map.elements()) {
    std::vector<LaplacePoint> points;
    points.reserve(e.geometry.size());
    for (const auto & lp : e.geometry.points()) {
      const double dx = rng.laplace(noise_scale);
      const double dy = rng.laplace(noise_scale);
      const Point2 mu{lp.mu().x + dx, lp.mu().y + dy};
      points.emplace_back(
        mu, mode == ScaleMode::Calibrated ? std::array{noise_scale, noise_scale} : lp.b());
    }
    elements.push_back({UncertainPolyline(std::move(points)), e.kind});
  }
  return UncertainMap(std::move(elements), map.drivable_area());
}

UncertainMap with_uniform_scale(const UncertainMap & map, double b)
{
  std::vector<MapElement> elements;
  elements.reserve(map.elements().size());
  for (const auto & e : map.elements()) {
    std::vector<LaplacePoint> points;
    points.reserve(e.geometry.size());
    for (const auto & lp : e.geometry.points()) {
      points.emplace_back(lp.mu(), b, b);
    }
    elements.push_back({UncertainPolyline(std::move(points)), e.kind});
  }
  return UncertainMap(std::move(elements), map.drivable_area());
}

}  // namespace uncad
