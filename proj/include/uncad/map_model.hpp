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

#ifndef UNCAD__MAP_MODEL_HPP_
#define UNCAD__MAP_MODEL_HPP_

#include "uncad/geometry.hpp"
#include "uncad/uncertainty.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace uncad
{

/// Upper bound on element count in one map.
inline constexpr std::size_t kMaxMapElements = 100;

enum class MapElementKind { Boundary, LaneDivider, PedCrossing };

std::string_view to_string(MapElementKind kind);
std::optional<MapElementKind> map_element_kind_from_string(std::string_view name);

struct MapElement
{
  UncertainPolyline geometry;
  MapElementKind kind{MapElementKind::Boundary};

  friend bool operator==(const MapElement &, const MapElement &) = default;
};

/**
 * @brief Perceived vectorized map plus the ground-truth drivable area.
 *
 * All elements carry the same number of vertices. The drivable area is never
 * perturbed; metrics use it as ground truth.
 */
class UncertainMap
{
public:
  UncertainMap() = default;
  UncertainMap(std::vector<MapElement> elements, MultiPolygon drivable_area);

  const std::vector<MapElement> & elements() const { return elements_; }
  const MultiPolygon & drivable_area() const { return drivable_area_; }

  friend bool operator==(const UncertainMap &, const UncertainMap &) = default;

private:
  std::vector<MapElement> elements_;
  MultiPolygon drivable_area_;
};

/// Elements of kind Boundary, in map order.
std::vector<UncertainPolyline> boundary_elements(const UncertainMap & map);

/// Elements of any kind, in map order.
std::vector<UncertainPolyline> all_elements(const UncertainMap & map);

enum class ScaleMode {
  /// Every scale is replaced by the injected noise scale.
  Calibrated,
  /// Scales are left as they were.
  Fixed,
};

/// Displaces every vertex location by independent per-axis Laplace noise.
UncertainMap perturb_map(
  const UncertainMap & map, double noise_scale, std::uint64_t seed,
  ScaleMode mode = ScaleMode::Calibrated);

/// Same geometry with every vertex scale set to `b` on both axes.
UncertainMap with_uniform_scale(const UncertainMap & map, double b);

}  // namespace uncad

#endif  // UNCAD__MAP_MODEL_HPP_
