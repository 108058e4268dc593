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

#ifndef UNCAD__GEOMETRY_HPP_
#define UNCAD__GEOMETRY_HPP_

#include <array>
#include <span>
#include <vector>

namespace uncad
{

// Ego-frame meters: x forward, y left. Headings in radians, counterclockwise.

struct Point2
{
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point2 &, const Point2 &) = default;
};

inline Point2 operator+(const Point2 & a, const Point2 & b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(const Point2 & a, const Point2 & b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, const Point2 & p) { return {s * p.x, s * p.y}; }

double dot(const Point2 & a, const Point2 & b);
double cross(const Point2 & a, const Point2 & b);
double norm(const Point2 & p);
double distance(const Point2 & a, const Point2 & b);
bool is_finite(const Point2 & p);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double radians);

class Pose2
{
public:
  Pose2() = default;
  Pose2(const Point2 & position, double heading);

  const Point2 & position() const { return position_; }
  double heading() const { return heading_; }

  friend bool operator==(const Pose2 &, const Pose2 &) = default;

private:
  Point2 position_{};
  double heading_{0.0};
};

/// Open polyline with at least two points and no coincident neighbours.
class Polyline
{
public:
  static constexpr double kMinSeparation = 1e-9;

  explicit Polyline(std::vector<Point2> points);

  /// Drops consecutive points closer than kMinSeparation before validating.
  static Polyline from_points_dedup(std::span<const Point2> points);

  const std::vector<Point2> & points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  friend bool operator==(const Polyline &, const Polyline &) = default;

private:
  std::vector<Point2> points_;
};

/// Closed ring stored with first == last. Outer rings are counterclockwise, holes clockwise.
class Polygon
{
public:
  static constexpr double kMinArea = 1e-12;

  explicit Polygon(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes = {});

  const std::vector<Point2> & outer() const { return outer_; }
  const std::vector<std::vector<Point2>> & holes() const { return holes_; }

  friend bool operator==(const Polygon &, const Polygon &) = default;

private:
  std::vector<Point2> outer_;
  std::vector<std::vector<Point2>> holes_;
};

class MultiPolygon
{
public:
  MultiPolygon() = default;
  explicit MultiPolygon(std::vector<Polygon> polygons) : polygons_(std::move(polygons)) {}

  const std::vector<Polygon> & polygons() const { return polygons_; }
  bool empty() const { return polygons_.empty(); }

  friend bool operator==(const MultiPolygon &, const MultiPolygon &) = default;

private:
  std::vector<Polygon> polygons_;
};

class OrientedBox
{
public:
  OrientedBox(const Point2 & center, double heading, double length, double width);

  const Point2 & center() const { return center_; }
  double heading() const { return heading_; }
  double length() const { return length_; }
  double width() const { return width_; }

  /// Same box grown by `margin` on every side.
  OrientedBox inflated(double margin) const;

  /// Counterclockwise, starting from front-left.
  std::array<Point2, 4> corners() const;

  friend bool operator==(const OrientedBox &, const OrientedBox &) = default;

private:
  Point2 center_;
  double heading_;
  double length_;
  double width_;
};

/// Signed area of a closed ring (first == last). Positive when counterclockwise.
double signed_ring_area(std::span<const Point2> ring);

std::array<Point2, 4> vehicle_corners(const Pose2 & pose, double length, double width);

/// Boundary-inclusive: points on an outer ring or on a hole ring count as inside.
bool point_in_multipolygon(const Point2 & p, const MultiPolygon & area);

double dist_point_segment(const Point2 & p, const Point2 & a, const Point2 & b);
double dist_point_polyline(const Point2 & p, const Polyline & line);

/// Separating-axis test; touching boxes overlap.
bool boxes_overlap(const OrientedBox & a, const OrientedBox & b);

}  // namespace uncad

#endif  // UNCAD__GEOMETRY_HPP_
