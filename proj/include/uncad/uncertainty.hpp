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

#ifndef UNCAD__UNCERTAINTY_HPP_
#define UNCAD__UNCERTAINTY_HPP_

#include "uncad/geometry.hpp"

#include <array>
#include <span>
#include <vector>

namespace uncad
{

/// Smallest admissible Laplace scale, meters.
inline constexpr double kMinLaplaceScale = 1e-3;

/// Default number of vertices per map element.
inline constexpr std::size_t kDefaultPointsPerElement = 20;

/**
 * @brief A map vertex whose per-axis position error is Laplace distributed.
 *
 * The location is `mu` and the scales are `b = (b_x, b_y)`. Scales below
 * kMinLaplaceScale are raised to it on construction.
 */
class LaplacePoint
{
public:
  LaplacePoint() = default;
  LaplacePoint(const Point2 & mu, const std::array<double, 2> & b);
  LaplacePoint(const Point2 & mu, double b_x, double b_y) : LaplacePoint(mu, {b_x, b_y}) {}

  const Point2 & mu() const { return mu_; }
  const std::array<double, 2> & b() const { return b_; }

  friend bool operator==(const LaplacePoint &, const LaplacePoint &) = default;

private:
  Point2 mu_{};
  std::array<double, 2> b_{kMinLaplaceScale, kMinLaplaceScale};
};

/// Ordered vertices of one uncertain map element.
class UncertainPolyline
{
public:
  UncertainPolyline() = default;
  explicit UncertainPolyline(std::vector<LaplacePoint> points);

  const std::vector<LaplacePoint> & points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// The location geometry, with coincident neighbours merged.
  Polyline mean_polyline() const;

  friend bool operator==(const UncertainPolyline &, const UncertainPolyline &) = default;

private:
  std::vector<LaplacePoint> points_;
};

/// sum over axes of log(2 b_j) + |gt_j - mu_j| / b_j
double laplace_point_nll(const Point2 & gt, const LaplacePoint & lp);

/// Summed point NLL over index-matched pairs. Throws on length mismatch.
double element_nll(std::span<const Point2> gt_points, const UncertainPolyline & element);

/// Log of the joint element density; always equal to -element_nll.
double log_joint_density(std::span<const Point2> gt_points, const UncertainPolyline & element);

/// Closed-form Laplace MLE: per-axis median (midpoint for even counts) and
/// mean absolute deviation from it, clamped to kMinLaplaceScale.
LaplacePoint fit_laplace_mle(std::span<const Point2> observations);

/// Smallest point NLL of `p` against every vertex of every element.
double min_nll_to_elements(const Point2 & p, std::span<const UncertainPolyline> elements);

}  // namespace uncad

#endif  // UNCAD__UNCERTAINTY_HPP_
