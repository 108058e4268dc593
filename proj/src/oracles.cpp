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

#include "uncad/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace uncad::oracle
{
namespace
{

using Real = long double;

struct P
{
  Real x;
  Real y;
};

constexpr Real kOnEdge = 1e-12L;

// Ray directions, all off the axes.
constexpr std::array<Real, 4> kRayAngles{0.3137L, 1.9021L, 3.4473L, 5.0719L};

Real seg_distance(const P & p, const P & a, const P & b)
{
  const Real ux = b.x - a.x;
  const Real uy = b.y - a.y;
  const Real len2 = ux * ux + uy * uy;
  Real t = len2 > 0 ? ((p.x - a.x) * ux + (p.y - a.y) * uy) / len2 : 0;
  t = std::clamp<Real>(t, 0, 1);
  const Real dx = p.x - (a.x + t * ux);
  const Real dy = p.y - (a.y + t * uy);
  return std::sqrt(dx * dx + dy * dy);
}

template <typename Fn>
void for_each_edge(const MultiPolygon & area, Fn && fn)
{
  const auto ring_edges = [&fn](const std::vector<Point2> & ring) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      fn(P{ring[i].x, ring[i].y}, P{ring[i + 1].x, ring[i + 1].y});
    }
  };
  for (const auto & poly : area.polygons()) {
    ring_edges(poly.outer());
    for (const auto & h : poly.holes()) {
      ring_edges(h);
    }
  }
}

/// Parity of ray crossings against every ring in `area`.
bool odd_crossings(const MultiPolygon & area, const P & p, Real angle)
{
  const Real dx = std::cos(angle);
  const Real dy = std::sin(angle);
  bool odd = false;
  for_each_edge(area, [&](const P & a, const P & b) {
    const Real ex = b.x - a.x;
    const Real ey = b.y - a.y;
    const Real denom = dx * ey - dy * ex;
    if (denom == 0) {
      return;
    }
    const Real wx = a.x - p.x;
    const Real wy = a.y - p.y;
    const Real t = (wx * ey - wy * ex) / denom;  // along the ray
    const Real s = (wx * dy - wy * dx) / denom;  // along the edge
    if (t > 0 && s >= 0 && s < 1) {
      odd = !odd;
    }
  });
  return odd;
}

double abs_sum(std::span<const double> values, double center)
{
  double s = 0.0;
  for (const double v : values) {
    s += std::abs(v - center);
  }
  return s;
}

double fit_location(std::span<const double> values)
{
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) {
    return lo;
  }
  // Level 1: coarse grid to find the basin.
  constexpr int kCoarse = 400;
  double best_x = lo;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kCoarse; ++k) {
    const double x = lo + (hi - lo) * k / kCoarse;
    const double f = abs_sum(values, x);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  // Level 2: the kinks around the basin, meaning those within two grid steps
  // plus the nearest one on each side. A flat minimum resolves to its midpoint.
  const double step = (hi - lo) / kCoarse;
  double left = -std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  for (const double v : values) {
    if (v <= best_x) left = std::max(left, v);
    if (v >= best_x) right = std::min(right, v);
  }
  double f_star = std::numeric_limits<double>::infinity();
  for (const double v : values) {
    if (std::abs(v - best_x) <= 2.0 * step || v == left || v == right) {
      f_star = std::min(f_star, abs_sum(values, v));
    }
  }
  const double tol = 1e-11 * (1.0 + f_star);
  double m_lo = std::numeric_limits<double>::infinity();
  double m_hi = -std::numeric_limits<double>::infinity();
  for (const double v : values) {
    if (abs_sum(values, v) <= f_star + tol) {
      m_lo = std::min(m_lo, v);
      m_hi = std::max(m_hi, v);
    }
  }
  return 0.5 * (m_lo + m_hi);
}

double fit_scale(std::span<const double> values, double location)
{
  const double n = static_cast<double>(values.size());
  const double s = abs_sum(values, location);
  const auto objective = [&](double b) { return n * std::log(2.0 * b) + s / b; };

  constexpr double kLo = kMinLaplaceScale;
  constexpr double kHi = 1e3;
  constexpr int kCoarse = 4000;
  const double ratio = std::pow(kHi / kLo, 1.0 / kCoarse);
  int best_k = 0;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= kCoarse; ++k) {
    const double f = objective(kLo * std::pow(ratio, k));
    if (f < best_f) {
      best_f = f;
      best_k = k;
    }
  }
  const double a = kLo * std::pow(ratio, std::max(best_k - 1, 0));
  const double b = kLo * std::pow(ratio, std::min(best_k + 1, kCoarse));
  constexpr int kFine = 4000;
  double best_b = kLo * std::pow(ratio, best_k);
  for (int k = 0; k <= kFine; ++k) {
    const double x = a + (b - a) * k / kFine;
    const double f = objective(x);
    if (f < best_f) {
      best_f = f;
      best_b = x;
    }
  }
  return best_b;
}

}  // namespace

std::array<Point2, 4> corners_at(const CandidateTrajectory & traj, std::size_t t, const VehicleDims & dims)
{
  const Real c = std::cos(static_cast<Real>(traj.headings.at(t)));
  const Real s = std::sin(static_cast<Real>(traj.headings.at(t)));
  const Real hl = static_cast<Real>(dims.length) / 2;
  const Real hw = static_cast<Real>(dims.width) / 2;
  const Real x = traj.waypoints.at(t).x;
  const Real y = traj.waypoints.at(t).y;
  const std::array<std::array<Real, 2>, 4> local{{{hl, hw}, {-hl, hw}, {-hl, -hw}, {hl, -hw}}};
  std::array<Point2, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = {
      static_cast<double>(x + local[i][0] * c - local[i][1] * s),
      static_cast<double>(y + local[i][0] * s + local[i][1] * c)};
  }
  return out;
}

double edge_distance(const MultiPolygon & area, const Point2 & p)
{
  Real best = std::numeric_limits<Real>::infinity();
  const P q{p.x, p.y};
  for_each_edge(area, [&](const P & a, const P & b) { best = std::min(best, seg_distance(q, a, b)); });
  return static_cast<double>(best);
}

bool contains(const MultiPolygon & area, const Point2 & p)
{
  if (edge_distance(area, p) <= kOnEdge) {
    return true;
  }
  const P q{p.x, p.y};
  int votes = 0;
  for (const Real angle : kRayAngles) {
    votes += odd_crossings(area, q, angle) ? 1 : 0;
  }
  return votes >= 2;
}

double oracle_dacr(
  const CandidateTrajectory & traj, const VehicleDims & dims, const MultiPolygon & da,
  std::size_t horizon)
{
  if (horizon == 0 || horizon > traj.waypoints.size()) {
    throw std::invalid_argument("oracle_dacr: bad horizon");
  }
  int bad_steps = 0;
  for (std::size_t t = 0; t < horizon; ++t) {
    bool all_in = true;
    for (const auto & c : corners_at(traj, t, dims)) {
      all_in = all_in && contains(da, c);
    }
    bad_steps += all_in ? 0 : 1;
  }
  return static_cast<double>(bad_steps) / static_cast<double>(horizon);
}

bool near_edge(
  const CandidateTrajectory & traj, const VehicleDims & dims, const MultiPolygon & da,
  std::size_t horizon, double tol)
{
  for (std::size_t t = 0; t < horizon; ++t) {
    for (const auto & c : corners_at(traj, t, dims)) {
      if (edge_distance(da, c) <= tol) {
        return true;
      }
    }
  }
  return false;
}

LaplacePoint oracle_laplace_fit(std::span<const Point2> observations)
{
  if (observations.empty()) {
    throw std::invalid_argument("oracle_laplace_fit: no observations");
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto & p : observations) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  const double mx = fit_location(xs);
  const double my = fit_location(ys);
  return LaplacePoint({mx, my}, {fit_scale(xs, mx), fit_scale(ys, my)});
}

double oracle_trajectory_risk(
  const CandidateTrajectory & traj, std::span<const UncertainPolyline> elements,
  RiskAggregator aggregator)
{
  std::vector<double> per_waypoint;
  for (const auto & wp : traj.waypoints) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto & e : elements) {
      for (const auto & lp : e.points()) {
        double nll = 0.0;
        const double gt[2] = {wp.x, wp.y};
        const double mu[2] = {lp.mu().x, lp.mu().y};
        for (int j = 0; j < 2; ++j) {
          nll += std::log(2.0 * lp.b()[j]) + std::abs(gt[j] - mu[j]) / lp.b()[j];
        }
        if (nll < lowest) {
          lowest = nll;
        }
      }
    }
    per_waypoint.push_back(lowest);
  }
  if (aggregator == RiskAggregator::Min) {
    return *std::min_element(per_waypoint.begin(), per_waypoint.end());
  }
  double total = 0.0;
  for (const double v : per_waypoint) {
    total += v;
  }
  return total / static_cast<double>(per_waypoint.size());
}

std::size_t oracle_select(
  const CandidateSet & set, Command command, const SelectionConfig & cfg,
  std::span<const OracleFlags> flags)
{
  const auto it = set.per_command().find(command);
  if (it == set.per_command().end()) {
    throw std::invalid_argument("oracle_select: unknown command");
  }
  const auto & cands = it->second;
  if (flags.size() != cands.size()) {
    throw std::invalid_argument("oracle_select: flag count mismatch");
  }

  std::vector<double> score(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) {
    score[i] = cands[i].confidence;
    if (cfg.enable_uncertainty_filter && flags[i].risk_nll < cfg.nll_threshold) score[i] = 0.0;
    if (cfg.enable_agent_filter && flags[i].agent_collision) score[i] = 0.0;
    if (cfg.enable_boundary_filter && flags[i].boundary_collision) score[i] = 0.0;
  }

  const bool all_zero = std::all_of(score.begin(), score.end(), [](double s) { return s == 0.0; });
  if (!all_zero) {
    const double top = *std::max_element(score.begin(), score.end());
    std::vector<std::size_t> tied;
    for (std::size_t i = 0; i < score.size(); ++i) {
      if (score[i] == top) tied.push_back(i);
    }
    if (cfg.enable_uncertainty_filter) {
      double best_risk = -std::numeric_limits<double>::infinity();
      for (const auto i : tied) best_risk = std::max(best_risk, flags[i].risk_nll);
      for (const auto i : tied) {
        if (flags[i].risk_nll == best_risk) return i;
      }
    }
    return tied.front();
  }

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!(cfg.enable_agent_filter && flags[i].agent_collision)) pool.push_back(i);
  }
  if (pool.empty()) {
    double best_conf = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cands.size(); ++i) best_conf = std::max(best_conf, cands[i].confidence);
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (cands[i].confidence == best_conf) return i;
    }
  }
  double best_risk = -std::numeric_limits<double>::infinity();
  for (const auto i : pool) best_risk = std::max(best_risk, flags[i].risk_nll);
  double best_conf = -std::numeric_limits<double>::infinity();
  for (const auto i : pool) {
    if (flags[i].risk_nll == best_risk) best_conf = std::max(best_conf, cands[i].confidence);
  }
  for (const auto i : pool) {
    if (flags[i].risk_nll == best_risk && cands[i].confidence == best_conf) return i;
  }
  return pool.front();
}

}  // namespace uncad::oracle
