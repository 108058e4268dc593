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

// Scenario file format v1: one JSON document per scenario, doubles in
// shortest round-trip form.

#include "uncad/errors.hpp"
#include "uncad/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace uncad
{
namespace
{

using nlohmann::json;

json point_json(const Point2 & p) { return json::array({p.x, p.y}); }
json pose_json(const Pose2 & p)
{
  return json::array({p.position().x, p.position().y, p.heading()});
}
json dims_json(const VehicleDims & d) { return json::array({d.length, d.width}); }

json ring_json(const std::vector<Point2> & ring)
{
  json out = json::array();
  for (const auto & p : ring) {
    out.push_back(point_json(p));
  }
  return out;
}

json trajectory_json(const CandidateTrajectory & traj)
{
  json wps = json::array();
  for (const auto & p : traj.waypoints) {
    wps.push_back(point_json(p));
  }
  return json{{"confidence", traj.confidence}, {"waypoints", wps}, {"headings", traj.headings}};
}

json params_json(const GeneratorParams & p)
{
  return json{
    {"noise_scale", p.noise_scale},
    {"n_agents", p.n_agents},
    {"n_candidates", p.n_candidates},
    {"curvature_range", p.curvature_range},
    {"speed_range", p.speed_range},
    {"corridor_half_width", p.corridor_half_width},
    {"ego_dims", dims_json(p.ego_dims)},
    {"points_per_element", p.points_per_element},
  };
}

// Reading. Every accessor takes the dotted path of the field it reads.

std::string child(const std::string & path, const std::string & key)
{
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string & path, std::size_t i)
{
  return path + "[" + std::to_string(i) + "]";
}

const json & field(const json & j, const char * key, const std::string & path)
{
  if (!j.is_object()) {
    throw ParseError("field '" + path + "': expected an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError("field '" + child(path, key) + "': missing");
  }
  return *it;
}

double number(const json & j, const std::string & path)
{
  if (!j.is_number()) {
    throw ParseError("field '" + path + "': expected a number");
  }
  return j.get<double>();
}

std::string text(const json & j, const std::string & path)
{
  if (!j.is_string()) {
    throw ParseError("field '" + path + "': expected a string");
  }
  return j.get<std::string>();
}

std::uint64_t unsigned_int(const json & j, const std::string & path)
{
  if (!j.is_number_unsigned()) {
    throw ParseError("field '" + path + "': expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

const json & array(const json & j, const std::string & path, std::size_t exact = 0)
{
  if (!j.is_array()) {
    throw ParseError("field '" + path + "': expected an array");
  }
  if (exact != 0 && j.size() != exact) {
    throw ParseError(
      "field '" + path + "': expected " + std::to_string(exact) + " entries, got " +
      std::to_string(j.size()));
  }
  return j;
}

std::vector<double> numbers(const json & j, const std::string & path, std::size_t exact = 0)
{
  std::vector<double> out;
  const json & arr = array(j, path, exact);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(number(arr[i], index(path, i)));
  }
  return out;
}

Point2 point_from(const json & j, const std::string & path)
{
  const auto v = numbers(j, path, 2);
  const Point2 p{v[0], v[1]};
  if (!is_finite(p)) {
    throw InvariantError("field '" + path + "': non-finite coordinate");
  }
  return p;
}

Pose2 pose_from(const json & j, const std::string & path)
{
  const auto v = numbers(j, path, 3);
  try {
    return Pose2({v[0], v[1]}, v[2]);
  } catch (const std::invalid_argument & e) {
    throw InvariantError("field '" + path + "': " + e.what());
  }
}

VehicleDims dims_from(const json & j, const std::string & path)
{
  const auto v = numbers(j, path, 2);
  if (!(v[0] > 0.0) || !(v[1] > 0.0)) {
    throw InvariantError("field '" + path + "': dimensions must be positive");
  }
  return {v[0], v[1]};
}

std::vector<Point2> ring_from(const json & j, const std::string & path)
{
  std::vector<Point2> ring;
  const json & arr = array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    ring.push_back(point_from(arr[i], index(path, i)));
  }
  return ring;
}

UncertainMap map_from(const json & j, const std::string & path)
{
  std::vector<MapElement> elements;
  const std::string ep = child(path, "elements");
  const json & arr = array(field(j, "elements", path), ep);
  for (std::size_t e = 0; e < arr.size(); ++e) {
    const std::string p = index(ep, e);
    const std::string kind_name = text(field(arr[e], "kind", p), child(p, "kind"));
    const auto kind = map_element_kind_from_string(kind_name);
    if (!kind) {
      throw ParseError("field '" + child(p, "kind") + "': unknown kind '" + kind_name + "'");
    }
    const std::string pp = child(p, "points");
    const json & pts = array(field(arr[e], "points", p), pp);
    std::vector<LaplacePoint> lps;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string vp = index(pp, i);
      const auto v = numbers(pts[i], vp, 4);
      for (int axis = 0; axis < 2; ++axis) {
        if (!std::isfinite(v[2 + axis]) || v[2 + axis] < kMinLaplaceScale) {
          throw InvariantError(
            "field '" + vp + ".b[" + std::to_string(axis) + "]': Laplace scale " +
            std::to_string(v[2 + axis]) + " is below the minimum " +
            std::to_string(kMinLaplaceScale));
        }
      }
      if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
        throw InvariantError("field '" + vp + ".mu': non-finite coordinate");
      }
      lps.emplace_back(Point2{v[0], v[1]}, v[2], v[3]);
    }
    try {
      elements.push_back({UncertainPolyline(std::move(lps)), *kind});
    } catch (const std::invalid_argument & ex) {
      throw InvariantError("field '" + pp + "': " + ex.what());
    }
  }

  std::vector<Polygon> polygons;
  const std::string dp = child(path, "drivable_area");
  const json & da = array(field(j, "drivable_area", path), dp);
  for (std::size_t k = 0; k < da.size(); ++k) {
    const std::string p = index(dp, k);
    std::vector<Point2> outer = ring_from(field(da[k], "outer", p), child(p, "outer"));
    std::vector<std::vector<Point2>> holes;
    const std::string hp = child(p, "holes");
    const json & harr = array(field(da[k], "holes", p), hp);
    for (std::size_t h = 0; h < harr.size(); ++h) {
      holes.push_back(ring_from(harr[h], index(hp, h)));
    }
    try {
      polygons.emplace_back(std::move(outer), std::move(holes));
    } catch (const std::invalid_argument & ex) {
      throw InvariantError("field '" + p + "': " + ex.what());
    }
  }
  try {
    return UncertainMap(std::move(elements), MultiPolygon(std::move(polygons)));
  } catch (const std::invalid_argument & ex) {
    throw InvariantError("field '" + path + "': " + ex.what());
  }
}

CandidateTrajectory trajectory_from(const json & j, const std::string & path)
{
  CandidateTrajectory traj;
  traj.confidence = number(field(j, "confidence", path), child(path, "confidence"));
  traj.waypoints = ring_from(field(j, "waypoints", path), child(path, "waypoints"));
  traj.headings = numbers(field(j, "headings", path), child(path, "headings"));
  try {
    validate_trajectory(traj);
  } catch (const std::invalid_argument & ex) {
    throw InvariantError("field '" + path + "': " + ex.what());
  }
  if (!(traj.confidence >= 0.0 && traj.confidence <= 1.0)) {
    throw InvariantError("field '" + child(path, "confidence") + "': must lie in [0, 1]");
  }
  return traj;
}

GeneratorParams params_from(const json & j, const std::string & path)
{
  GeneratorParams p;
  p.noise_scale = number(field(j, "noise_scale", path), child(path, "noise_scale"));
  p.n_agents = static_cast<int>(number(field(j, "n_agents", path), child(path, "n_agents")));
  p.n_candidates =
    static_cast<int>(number(field(j, "n_candidates", path), child(path, "n_candidates")));
  const auto cr = numbers(field(j, "curvature_range", path), child(path, "curvature_range"), 2);
  p.curvature_range = {cr[0], cr[1]};
  const auto sr = numbers(field(j, "speed_range", path), child(path, "speed_range"), 2);
  p.speed_range = {sr[0], sr[1]};
  p.corridor_half_width =
    number(field(j, "corridor_half_width", path), child(path, "corridor_half_width"));
  p.ego_dims = dims_from(field(j, "ego_dims", path), child(path, "ego_dims"));
  p.points_per_element = static_cast<std::size_t>(
    unsigned_int(field(j, "points_per_element", path), child(path, "points_per_element")));
  return p;
}

json parse_document(const std::string & text_in)
{
  try {
    return json::parse(text_in);
  } catch (const json::parse_error & e) {
    // Translate the byte offset into a line number.
    const std::size_t upto = std::min<std::size_t>(e.byte, text_in.size());
    const auto line = 1 + std::count(text_in.begin(), text_in.begin() + static_cast<long>(upto), '\n');
    throw ParseError("line " + std::to_string(line) + ": " + e.what());
  }
}

void check_version(const json & doc)
{
  if (!doc.is_object()) {
    throw ParseError("document root must be an object");
  }
  const auto it = doc.find("version");
  if (it == doc.end()) {
    throw VersionError("missing 'version' field");
  }
  if (!it->is_number_integer() || it->get<long long>() != kScenarioSchemaVersion) {
    throw VersionError(
      "unsupported version " + it->dump() + ", expected " +
      std::to_string(kScenarioSchemaVersion));
  }
}

}  // namespace

std::string serialize_scenario(const Scenario & s)
{
  json elements = json::array();
  for (const auto & e : s.map.elements()) {
    json pts = json::array();
    for (const auto & lp : e.geometry.points()) {
      pts.push_back(json::array({lp.mu().x, lp.mu().y, lp.b()[0], lp.b()[1]}));
    }
    elements.push_back(json{{"kind", std::string(to_string(e.kind))}, {"points", pts}});
  }
  json da = json::array();
  for (const auto & poly : s.map.drivable_area().polygons()) {
    json holes = json::array();
    for (const auto & h : poly.holes()) {
      holes.push_back(ring_json(h));
    }
    da.push_back(json{{"outer", ring_json(poly.outer())}, {"holes", holes}});
  }

  json agents = json::array();
  for (std::size_t a = 0; a < s.agents.size(); ++a) {
    const auto & agent = s.agents[a];
    json modes = json::array();
    for (const auto & m : agent.modes) {
      json track = json::array();
      for (const auto & p : m.trajectory) {
        track.push_back(pose_json(p));
      }
      modes.push_back(json{{"confidence", m.confidence}, {"trajectory", track}});
    }
    json gt = json::array();
    for (const auto & box : s.agent_gt[a]) {
      gt.push_back(json::array(
        {box.center().x, box.center().y, box.heading(), box.length(), box.width()}));
    }
    agents.push_back(
      json{{"id", agent.id}, {"dims", dims_json(agent.dims)}, {"modes", modes}, {"gt_boxes", gt}});
  }

  json candidates = json::object();
  for (const auto & [cmd, trajs] : s.candidates.per_command()) {
    json list = json::array();
    for (const auto & t : trajs) {
      list.push_back(trajectory_json(t));
    }
    candidates[std::string(to_string(cmd))] = list;
  }

  json future = json::array();
  for (const auto & p : s.ego_gt_future) {
    future.push_back(pose_json(p));
  }

  const json doc{
    {"version", kScenarioSchemaVersion},
    {"id", s.id},
    {"seed", s.seed},
    {"scenario_class", std::string(to_string(s.scenario_class))},
    {"command", std::string(to_string(s.command))},
    {"ego", json{{"pose", pose_json(s.ego_pose)}, {"dims", dims_json(s.ego_dims)}}},
    {"ego_gt_future", future},
    {"map", json{{"elements", elements}, {"drivable_area", da}}},
    {"agents", agents},
    {"candidates", candidates},
  };
  return doc.dump(1) + "\n";
}

Scenario parse_scenario(const std::string & text_in)
{
  const json doc = parse_document(text_in);
  check_version(doc);

  Scenario s;
  s.id = text(field(doc, "id", ""), "id");
  s.seed = unsigned_int(field(doc, "seed", ""), "seed");

  const std::string class_name = text(field(doc, "scenario_class", ""), "scenario_class");
  const auto cls = scenario_class_from_string(class_name);
  if (!cls) {
    throw ParseError("field 'scenario_class': unknown class '" + class_name + "'");
  }
  s.scenario_class = *cls;

  const std::string cmd_name = text(field(doc, "command", ""), "command");
  const auto cmd = command_from_string(cmd_name);
  if (!cmd) {
    throw ParseError("field 'command': unknown command '" + cmd_name + "'");
  }
  s.command = *cmd;

  const json & ego = field(doc, "ego", "");
  s.ego_pose = pose_from(field(ego, "pose", "ego"), "ego.pose");
  s.ego_dims = dims_from(field(ego, "dims", "ego"), "ego.dims");

  const json & fut = array(field(doc, "ego_gt_future", ""), "ego_gt_future");
  for (std::size_t t = 0; t < fut.size(); ++t) {
    s.ego_gt_future.push_back(pose_from(fut[t], index("ego_gt_future", t)));
  }

  s.map = map_from(field(doc, "map", ""), "map");

  const json & agents = array(field(doc, "agents", ""), "agents");
  for (std::size_t a = 0; a < agents.size(); ++a) {
    const std::string p = index("agents", a);
    AgentPrediction pred;
    pred.id = text(field(agents[a], "id", p), child(p, "id"));
    pred.dims = dims_from(field(agents[a], "dims", p), child(p, "dims"));
    const std::string mp = child(p, "modes");
    const json & modes = array(field(agents[a], "modes", p), mp);
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const std::string q = index(mp, m);
      AgentMode mode;
      mode.confidence = number(field(modes[m], "confidence", q), child(q, "confidence"));
      const std::string tp = child(q, "trajectory");
      const json & track = array(field(modes[m], "trajectory", q), tp);
      for (std::size_t t = 0; t < track.size(); ++t) {
        mode.trajectory.push_back(pose_from(track[t], index(tp, t)));
      }
      pred.modes.push_back(std::move(mode));
    }
    const std::string gp = child(p, "gt_boxes");
    const json & gt = array(field(agents[a], "gt_boxes", p), gp);
    std::vector<OrientedBox> boxes;
    for (std::size_t t = 0; t < gt.size(); ++t) {
      const auto v = numbers(gt[t], index(gp, t), 5);
      try {
        boxes.emplace_back(Point2{v[0], v[1]}, v[2], v[3], v[4]);
      } catch (const std::invalid_argument & ex) {
        throw InvariantError("field '" + index(gp, t) + "': " + ex.what());
      }
    }
    s.agents.push_back(std::move(pred));
    s.agent_gt.push_back(std::move(boxes));
  }

  const json & cands = field(doc, "candidates", "");
  std::map<Command, std::vector<CandidateTrajectory>> per_command;
  for (const Command c : kAllCommands) {
    const std::string key(to_string(c));
    const std::string p = child("candidates", key);
    const json & list = array(field(cands, key.c_str(), "candidates"), p);
    for (std::size_t i = 0; i < list.size(); ++i) {
      per_command[c].push_back(trajectory_from(list[i], index(p, i)));
    }
  }
  try {
    s.candidates = CandidateSet(std::move(per_command));
  } catch (const std::invalid_argument & ex) {
    throw InvariantError(std::string("field 'candidates': ") + ex.what());
  }

  validate_scenario(s);
  return s;
}

std::string read_text_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failed for '" + path.string() + "'");
  }
  return buf.str();
}

void write_text_file(const std::filesystem::path & path, const std::string & contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  out << contents;
  out.flush();
  if (!out) {
    throw IoError("write failed for '" + path.string() + "'");
  }
}

void save_scenario(const Scenario & s, const std::filesystem::path & path)
{
  write_text_file(path, serialize_scenario(s));
}

Scenario load_scenario(const std::filesystem::path & path)
{
  const std::string contents = read_text_file(path);
  try {
    return parse_scenario(contents);
  } catch (const VersionError & e) {
    throw VersionError(path.string() + ": " + e.what());
  } catch (const ParseError & e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const InvariantError & e) {
    throw InvariantError(path.string() + ": " + e.what());
  }
}

std::string serialize_manifest(const Manifest & m)
{
  json entries = json::array();
  for (const auto & e : m.entries) {
    entries.push_back(json{
      {"id", e.id}, {"file", e.file}, {"scenario_class", std::string(to_string(e.scenario_class))}});
  }
  const json doc{
    {"version", kScenarioSchemaVersion},
    {"master_seed", m.master_seed},
    {"turn_fraction", m.turn_fraction},
    {"generator", params_json(m.params)},
    {"scenarios", entries},
  };
  return doc.dump(1) + "\n";
}

Manifest parse_manifest(const std::string & text_in)
{
  const json doc = parse_document(text_in);
  check_version(doc);
  Manifest m;
  m.master_seed = unsigned_int(field(doc, "master_seed", ""), "master_seed");
  m.turn_fraction = number(field(doc, "turn_fraction", ""), "turn_fraction");
  m.params = params_from(field(doc, "generator", ""), "generator");
  const json & arr = array(field(doc, "scenarios", ""), "scenarios");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = index("scenarios", i);
    ManifestEntry e;
    e.id = text(field(arr[i], "id", p), child(p, "id"));
    e.file = text(field(arr[i], "file", p), child(p, "file"));
    const std::string cls = text(field(arr[i], "scenario_class", p), child(p, "scenario_class"));
    const auto c = scenario_class_from_string(cls);
    if (!c) {
      throw ParseError("field '" + child(p, "scenario_class") + "': unknown class '" + cls + "'");
    }
    e.scenario_class = *c;
    m.entries.push_back(std::move(e));
  }
  return m;
}

void save_manifest(const Manifest & m, const std::filesystem::path & path)
{
  write_text_file(path, serialize_manifest(m));
}

Manifest load_manifest(const std::filesystem::path & path)
{
  const std::string contents = read_text_file(path);
  try {
    return parse_manifest(contents);
  } catch (const VersionError & e) {
    throw VersionError(path.string() + ": " + e.what());
  } catch (const ParseError & e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace uncad
