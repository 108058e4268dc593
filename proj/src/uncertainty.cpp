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

#include "uncad/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace uncad
{
namespace
{

/// Expects sorted input.
double median_of(const std::vector<double> & sorted)
{
  const std::size_t n = sorted.size();
  if (n % 2 == 1) {
    return sorted[n / 2];
  }
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

/// Sums in sorted order.
double mean_abs_deviation(const std::vector<double> & sorted, double center)
{
  double sum = 0.0;
  for (const double v : sorted) {
    sum += std::abs(v - center);
  }
  return sum / static_cast<double>(sorted.size());
}

}  // namespace

LaplacePoint::LaplacePoint(const Point2 & mu, const std::array<double, 2> & b)
: mu_(mu), b_{std::max(b[0], kMinLaplaceScale), std::max(b[1], kMinLaplaceScale)}
{
  if (!is_finite(mu) || !std::isfinite(b[0]) || !std::isfinite(b[1])) {
    throw std::invalid_argument("LaplacePoint: non-finite value");
  }
}

UncertainPolyline::UncertainPolyline(std::vector<LaplacePoint> points) : points_(std::move(points))
{
  if (points_.empty()) {
    throw std::invalid_argument("UncertainPolyline: needs at least one point");
  }
}

Polyline UncertainPolyline::mean_polyline() const
{
  std::vector<Point2> mus;
  mus.reserve(points_.size());
  for (const auto & lp : points_) {
    mus.push_back(lp.mu());
  }
  return Polyline::from_points_dedup(mus);
}

double laplace_point_nll(const Point2 & gt, const LaplacePoint & lp)
{
  const auto & b = lp.b();
  return std::log(2.0 * b[0]) + std::abs(gt.x - lp.mu().x) / b[0] + std::log(2.0 * b[1]) +
         std::abs(gt.y - lp.mu().y) / b[1];
}

double element_nll(std::span<const Point2> gt_points, const UncertainPolyline & element)
{
  if (gt_points.size() != element.size()) {
    throw std::invalid_argument("element_nll: ground truth and element lengths differ");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < gt_points.size(); ++i) {
    total += laplace_point_nll(gt_points[i], element.points()[i]);
  }
  return total;
}

double log_joint_density(std::span<const Point2> gt_points, const UncertainPolyline & element)
{
  return -element_nll(gt_points, element);
}

LaplacePoint fit_laplace_mle(std::span<const Point2> observations)
{
  if (observations.empty()) {
    throw std::invalid_argument("fit_laplace_mle: no observations");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  xs.reserve(observations.size());
  ys.reserve(observations.size());
  for (const auto & p : observations) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double mx = median_of(xs);
  const double my = median_of(ys);
  return LaplacePoint({mx, my}, {mean_abs_deviation(xs, mx), mean_abs_deviation(ys, my)});
}

double min_nll_to_elements(const Point2 & p, std::span<const UncertainPolyline> elements)
{
  if (elements.empty()) {
    throw std::invalid_argument("min_nll_to_elements: no elements");
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto & element : elements) {
    for (const auto & lp : element.points()) {
      best = std::min(best, laplace_point_nll(p, lp));
    }
  }
  return best;
}

}  // namespace uncad
