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

#include "uncad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace uncad
{
namespace
{

// Points closer than this to a ring edge are treated as lying on it.
constexpr double kOnEdgeTolerance = 1e-12;

int orientation_sign(const Point2 & a, const Point2 & b, const Point2 & c)
{
  const double v = cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool within_bounds(const Point2 & a, const Point2 & b, const Point2 & p)
{
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point2 & p1, const Point2 & p2, const Point2 & q1, const Point2 & q2)
{
  const int o1 = orientation_sign(p1, p2, q1);
  const int o2 = orientation_sign(p1, p2, q2);
  const int o3 = orientation_sign(q1, q2, p1);
  const int o4 = orientation_sign(q1, q2, p2);
  if (o1 != o2 && o3 != o4) {
    return true;
  }
  return (o1 == 0 && within_bounds(p1, p2, q1)) || (o2 == 0 && within_bounds(p1, p2, q2)) ||
         (o3 == 0 && within_bounds(q1, q2, p1)) || (o4 == 0 && within_bounds(q1, q2, p2));
}

void validate_ring(const std::vector<Point2> & ring, bool counterclockwise, const char * what)
{
  if (ring.size() < 4) {
    throw std::invalid_argument(std::string(what) + ": ring needs at least 3 distinct vertices");
  }
  if (!(ring.front() == ring.back())) {
    throw std::invalid_argument(std::string(what) + ": ring is not closed");
  }
  for (const auto & p : ring) {
    if (!is_finite(p)) {
      throw std::invalid_argument(std::string(what) + ": non-finite vertex");
    }
  }
  const double area = signed_ring_area(ring);
  if (std::abs(area) < Polygon::kMinArea) {
    throw std::invalid_argument(std::string(what) + ": degenerate ring area");
  }
  if ((area > 0.0) != counterclockwise) {
    throw std::invalid_argument(
      std::string(what) + (counterclockwise ? ": outer ring must be counterclockwise"
                                            : ": hole ring must be clockwise"));
  }

  const std::size_t n = ring.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 & a = ring[i];
    const Point2 & b = ring[i + 1];
    if (distance(a, b) <= Polyline::kMinSeparation) {
      throw std::invalid_argument(std::string(what) + ": repeated vertex");
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const Point2 & c = ring[j];
      const Point2 & d = ring[j + 1];
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) {
        // Shared vertex is fine; folding back onto the previous edge is not.
        const Point2 shared = (j == i + 1) ? b : a;
        const Point2 u = (j == i + 1) ? a - shared : b - shared;
        const Point2 v = (j == i + 1) ? d - shared : c - shared;
        if (cross(u, v) == 0.0 && dot(u, v) > 0.0) {
          throw std::invalid_argument(std::string(what) + ": ring folds back on itself");
        }
        continue;
      }
      if (segments_intersect(a, b, c, d)) {
        throw std::invalid_argument(std::string(what) + ": ring self-intersects");
      }
    }
  }
}

enum class RingSide { Inside, Outside, Boundary };

RingSide locate_in_ring(const Point2 & p, const std::vector<Point2> & ring)
{
  bool inside = false;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    const Point2 & a = ring[i];
    const Point2 & b = ring[i + 1];
    if (dist_point_segment(p, a, b) <= kOnEdgeTolerance) {
      return RingSide::Boundary;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_cross) {
        inside = !inside;
      }
    }
  }
  return inside ? RingSide::Inside : RingSide::Outside;
}

}  // namespace

double dot(const Point2 & a, const Point2 & b) { return a.x * b.x + a.y * b.y; }
double cross(const Point2 & a, const Point2 & b) { return a.x * b.y - a.y * b.x; }
double norm(const Point2 & p) { return std::hypot(p.x, p.y); }
double distance(const Point2 & a, const Point2 & b) { return norm(a - b); }
bool is_finite(const Point2 & p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double normalize_angle(double radians)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::fmod(radians, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  } else if (a > std::numbers::pi) {
    a -= two_pi;
  }
  return a;
}

Pose2::Pose2(const Point2 & position, double heading)
: position_(position), heading_(normalize_angle(heading))
{
  if (!is_finite(position) || !std::isfinite(heading)) {
    throw std::invalid_argument("Pose2: non-finite value");
  }
}

Polyline::Polyline(std::vector<Point2> points) : points_(std::move(points))
{
  if (points_.size() < 2) {
    throw std::invalid_argument("Polyline: needs at least 2 points");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!is_finite(points_[i])) {
      throw std::invalid_argument("Polyline: non-finite point");
    }
    if (i > 0 && distance(points_[i - 1], points_[i]) <= kMinSeparation) {
      throw std::invalid_argument("Polyline: coincident consecutive points");
    }
  }
}

Polyline Polyline::from_points_dedup(std::span<const Point2> points)
{
  std::vector<Point2> kept;
  kept.reserve(points.size());
  for (const auto & p : points) {
    if (kept.empty() || distance(kept.back(), p) > kMinSeparation) {
      kept.push_back(p);
    }
  }
  return Polyline(std::move(kept));
}

Polygon::Polygon(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes)
: outer_(std::move(outer)), holes_(std::move(holes))
{
  validate_ring(outer_, true, "Polygon outer");
  for (const auto & hole : holes_) {
    validate_ring(hole, false, "Polygon hole");
  }
}

OrientedBox::OrientedBox(const Point2 & center, double heading, double length, double width)
: center_(center), heading_(heading), length_(length), width_(width)
{
  if (!(length > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("OrientedBox: length and width must be positive");
  }
  if (!is_finite(center) || !std::isfinite(heading) || !std::isfinite(length) ||
      !std::isfinite(width)) {
    throw std::invalid_argument("OrientedBox: non-finite value");
  }
}

OrientedBox OrientedBox::inflated(double margin) const
{
  return OrientedBox(center_, heading_, length_ + 2.0 * margin, width_ + 2.0 * margin);
}

std::array<Point2, 4> OrientedBox::corners() const
{
  const double c = std::cos(heading_);
  const double s = std::sin(heading_);
  const Point2 fwd{0.5 * length_ * c, 0.5 * length_ * s};
  const Point2 left{-0.5 * width_ * s, 0.5 * width_ * c};
  return {
    center_ + fwd + left,
    center_ - fwd + left,
    center_ - fwd - left,
    center_ + fwd - left,
  };
}

double signed_ring_area(std::span<const Point2> ring)
{
  double twice = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    twice += cross(ring[i], ring[i + 1]);
  }
  return 0.5 * twice;
}

std::array<Point2, 4> vehicle_corners(const Pose2 & pose, double length, double width)
{
  if (!(length > 0.0) || !(width > 0.0)) {
    throw std::invalid_argument("vehicle_corners: length and width must be positive");
  }
  return OrientedBox(pose.position(), pose.heading(), length, width).corners();
}

bool point_in_multipolygon(const Point2 & p, const MultiPolygon & area)
{
  for (const auto & polygon : area.polygons()) {
    const RingSide outer = locate_in_ring(p, polygon.outer());
    if (outer == RingSide::Outside) {
      continue;
    }
    if (outer == RingSide::Boundary) {
      return true;
    }
    const bool in_hole = std::any_of(
      polygon.holes().begin(), polygon.holes().end(),
      [&p](const auto & hole) { return locate_in_ring(p, hole) == RingSide::Inside; });
    if (!in_hole) {
      return true;
    }
  }
  return false;
}

double dist_point_segment(const Point2 & p, const Point2 & a, const Point2 & b)
{
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) {
    return distance(p, a);
  }
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + t * ab);
}

double dist_point_polyline(const Point2 & p, const Polyline & line)
{
  const auto & pts = line.points();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    best = std::min(best, dist_point_segment(p, pts[i], pts[i + 1]));
  }
  return best;
}

bool boxes_overlap(const OrientedBox & a, const OrientedBox & b)
{
  const Point2 d = b.center() - a.center();
  const std::array<double, 2> headings{a.heading(), b.heading()};
  for (const double h : headings) {
    const Point2 u{std::cos(h), std::sin(h)};
    const Point2 v{-u.y, u.x};
    for (const Point2 & axis : {u, v}) {
      const auto half_extent = [&axis](const OrientedBox & box) {
        const double c = std::abs(std::cos(box.heading()) * axis.x + std::sin(box.heading()) * axis.y);
        const double s = std::abs(-std::sin(box.heading()) * axis.x + std::cos(box.heading()) * axis.y);
        return 0.5 * box.length() * c + 0.5 * box.width() * s;
      };
      if (std::abs(dot(d, axis)) > half_extent(a) + half_extent(b)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace uncad
