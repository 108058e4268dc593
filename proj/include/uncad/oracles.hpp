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

#ifndef UNCAD__ORACLES_HPP_
#define UNCAD__ORACLES_HPP_

// Slow reference implementations used for differential checks. Nothing here
// calls into the geometry, uncertainty, selection or metrics code paths; only
// the plain data types are shared.

#include "uncad/geometry.hpp"
#include "uncad/selection.hpp"
#include "uncad/trajectory.hpp"
#include "uncad/uncertainty.hpp"

#include <span>
#include <string>
#include <vector>

namespace uncad::oracle
{

/// Footprint corners of `traj` at step `t`, computed in long double.
std::array<Point2, 4> corners_at(const CandidateTrajectory & traj, std::size_t t, const VehicleDims & dims);

/// Even-odd ray casting in long double, majority vote over four ray directions
/// (ties count as inside). Points within 1e-12 m of an edge are inside.
bool contains(const MultiPolygon & area, const Point2 & p);

/// Smallest distance from `p` to any ring edge of `area`.
double edge_distance(const MultiPolygon & area, const Point2 & p);

/// Drivable-area conflict rate over the first `horizon` steps.
double oracle_dacr(
  const CandidateTrajectory & traj, const VehicleDims & dims, const MultiPolygon & da,
  std::size_t horizon);

/// True if some corner in the first `horizon` steps lies within `tol` of a DA edge.
bool near_edge(
  const CandidateTrajectory & traj, const VehicleDims & dims, const MultiPolygon & da,
  std::size_t horizon, double tol = 1e-9);

/// Minimizes the summed Laplace NLL numerically: a coarse grid locates the
/// location basin, a refinement pass picks the best kink (midpoint on flat
/// stretches), then a geometric then linear grid over the scale.
LaplacePoint oracle_laplace_fit(std::span<const Point2> observations);

/// Exhaustive double loop over waypoints and map vertices.
double oracle_trajectory_risk(
  const CandidateTrajectory & traj, std::span<const UncertainPolyline> elements,
  RiskAggregator aggregator);

struct OracleFlags
{
  double risk_nll{0.0};
  bool agent_collision{false};
  bool boundary_collision{false};
};

/// Literal zero-then-argmax rule over one command's candidates.
std::size_t oracle_select(
  const CandidateSet & set, Command command, const SelectionConfig & cfg,
  std::span<const OracleFlags> flags);

}  // namespace uncad::oracle

#endif  // UNCAD__ORACLES_HPP_
