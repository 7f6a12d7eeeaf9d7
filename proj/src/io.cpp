#include "postgrasp/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace postgrasp {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw InputError(source_ + ": " + (path.empty() ? "<root>" : path) + ": " + msg);
  }

  json parse(std::string_view text) const {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(source_ + ": " + e.what());
    }
  }

  void object(const json& j, const std::string& path, std::initializer_list<const char*> required,
              std::initializer_list<const char*> optional = {}) const {
    if (!j.is_object()) fail(path, "expected an object");
    for (const char* key : required) {
      if (!j.contains(key)) fail(path, std::string("missing field '") + key + "'");
    }
    for (const auto& [key, value] : j.items()) {
      const auto known = [&](std::initializer_list<const char*> keys) {
        return std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
      };
      if (!known(required) && !known(optional)) fail(path, "unknown field '" + key + "'");
    }
  }

  void version(const json& j) const {
    if (!j.contains("schema_version")) fail("schema_version", "missing");
    if (!j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != kSchemaVersion) {
      fail("schema_version", "unsupported version (expected " + std::to_string(kSchemaVersion) + ")");
    }
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }

  int integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  bool boolean(const json& j, const std::string& path) const {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

  Eigen::VectorXd vector(const json& j, const std::string& path, int size = -1) const {
    if (!j.is_array()) fail(path, "expected an array");
    if (size >= 0 && static_cast<int>(j.size()) != size) fail(path, "expected " + std::to_string(size) + " numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], path + "[" + std::to_string(i) + "]");
    return v;
  }

  Eigen::Vector3d vec3(const json& j, const std::string& path) const { return vector(j, path, 3); }

  Rotation quaternion(const json& j, const std::string& path) const {
    const Eigen::VectorXd q = vector(j, path, 4);
    const double n = q.norm();
    if (std::abs(n - 1.0) > 1e-6) fail(path, "quaternion [w,x,y,z] must have unit norm");
    return Rotation(q(0), q(1), q(2), q(3));
  }

  Pose pose(const json& j, const std::string& path) const {
    object(j, path, {"translation", "quaternion"});
    return {quaternion(j["quaternion"], path + ".quaternion"), vec3(j["translation"], path + ".translation")};
  }

  Eigen::Matrix3d inertia(const json& j, const std::string& path) const {
    const Eigen::VectorXd v = vector(j, path, 6);  // xx yy zz xy xz yz
    Eigen::Matrix3d m;
    m << v(0), v(3), v(4),
         v(3), v(1), v(5),
         v(4), v(5), v(2);
    return m;
  }

  const std::string& source() const { return source_; }

 private:
  std::string source_;
};

std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

ojson vec_json(const Eigen::VectorXd& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ojson pose_json(const Pose& p) {
  ojson o;
  o["translation"] = vec_json(p.translation);
  o["quaternion"] = {p.rotation.w(), p.rotation.x(), p.rotation.y(), p.rotation.z()};
  return o;
}

ojson inertia_json(const Eigen::Matrix3d& m) { return {m(0, 0), m(1, 1), m(2, 2), m(0, 1), m(0, 2), m(1, 2)}; }

GraspCandidate grasp_from(const Reader& r, const json& j, const std::string& path) {
  r.object(j, path, {"id", "translation", "quaternion"});
  return {r.string(j["id"], path + ".id"),
          {r.quaternion(j["quaternion"], path + ".quaternion"), r.vec3(j["translation"], path + ".translation")}};
}

ojson grasp_json(const GraspCandidate& g) {
  ojson o;
  o["id"] = g.id;
  const ojson p = pose_json(g.object_to_gripper);
  o["translation"] = p["translation"];
  o["quaternion"] = p["quaternion"];
  return o;
}

std::vector<GraspCandidate> grasp_list(const Reader& r, const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) r.fail(path, "expected a non-empty array of grasps");
  std::vector<GraspCandidate> grasps;
  for (std::size_t i = 0; i < j.size(); ++i) grasps.push_back(grasp_from(r, j[i], index_path(path, i)));
  for (std::size_t i = 0; i < grasps.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (grasps[i].id == grasps[k].id) r.fail(index_path(path, i) + ".id", "duplicate grasp id '" + grasps[i].id + "'");
    }
  }
  return grasps;
}

}  // namespace

ChainModel parse_robot(std::string_view text, const std::string& source) {
  const Reader r(source);
  const json doc = r.parse(text);
  r.version(doc);
  r.object(doc, "", {"schema_version", "name", "base_pose", "joints", "links", "tool_transform"});
  const json& joints = doc["joints"];
  const json& links = doc["links"];
  if (!joints.is_array() || joints.empty()) r.fail("joints", "expected a non-empty array");
  if (!links.is_array() || links.size() != joints.size()) r.fail("links", "expected one link per joint");

  std::vector<JointSpec> joint_specs;
  std::vector<LinkSpec> link_specs;
  for (std::size_t i = 0; i < joints.size(); ++i) {
    const std::string p = index_path("joints", i);
    const json& j = joints[i];
    r.object(j, p, {"kind", "axis", "origin", "limits", "velocity_limit"});
    JointSpec spec;
    const std::string kind = r.string(j["kind"], p + ".kind");
    if (kind == "revolute") spec.kind = JointKind::revolute;
    else if (kind == "prismatic") spec.kind = JointKind::prismatic;
    else r.fail(p + ".kind", "expected 'revolute' or 'prismatic'");
    spec.axis = r.vec3(j["axis"], p + ".axis");
    if (std::abs(spec.axis.norm() - 1.0) > 1e-6) r.fail(p + ".axis", "must be a unit vector");
    spec.origin = r.pose(j["origin"], p + ".origin");
    const Eigen::VectorXd lim = r.vector(j["limits"], p + ".limits", 2);
    if (!(lim(0) < lim(1))) r.fail(p + ".limits", "must satisfy min < max");
    spec.lower = lim(0);
    spec.upper = lim(1);
    spec.velocity_limit = r.number(j["velocity_limit"], p + ".velocity_limit");
    if (!(spec.velocity_limit > 0.0)) r.fail(p + ".velocity_limit", "must be positive");
    joint_specs.push_back(spec);
  }
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string p = index_path("links", i);
    const json& l = links[i];
    r.object(l, p, {"mass", "com", "inertia"});
    LinkSpec spec;
    spec.mass = r.number(l["mass"], p + ".mass");
    if (spec.mass < 0.0) r.fail(p + ".mass", "must be non-negative (link " + std::to_string(i) + ")");
    spec.com = r.vec3(l["com"], p + ".com");
    spec.inertia = r.inertia(l["inertia"], p + ".inertia");
    link_specs.push_back(spec);
  }
  try {
    return ChainModel(r.string(doc["name"], "name"), r.pose(doc["base_pose"], "base_pose"), std::move(joint_specs),
                      std::move(link_specs), r.pose(doc["tool_transform"], "tool_transform"));
  } catch (const std::invalid_argument& e) {
    throw InputError(source + ": " + e.what());
  }
}

ChainModel load_robot(const std::filesystem::path& path) { return parse_robot(read_file(path), path.string()); }

std::string robot_to_json(const ChainModel& model) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = model.name();
  doc["base_pose"] = pose_json(model.base());
  doc["joints"] = ojson::array();
  doc["links"] = ojson::array();
  for (const JointSpec& j : model.joints()) {
    ojson o;
    o["kind"] = j.kind == JointKind::revolute ? "revolute" : "prismatic";
    o["axis"] = vec_json(j.axis);
    o["origin"] = pose_json(j.origin);
    o["limits"] = {j.lower, j.upper};
    o["velocity_limit"] = j.velocity_limit;
    doc["joints"].push_back(o);
  }
  for (const LinkSpec& l : model.links()) {
    ojson o;
    o["mass"] = l.mass;
    o["com"] = vec_json(l.com);
    o["inertia"] = inertia_json(l.inertia);
    doc["links"].push_back(o);
  }
  doc["tool_transform"] = pose_json(model.tool());
  return doc.dump(2) + "\n";
}

TaskSpec parse_task(std::string_view text, const std::string& source) {
  const Reader r(source);
  const json doc = r.parse(text);
  r.version(doc);
  r.object(doc, "", {"schema_version", "name", "object", "object_waypoints"},
           {"description", "total_time_s", "gravity", "grasps", "sweep", "resample_count", "ik"});
  TaskSpec task;
  task.name = r.string(doc["name"], "name");
  if (task.name.empty() || task.name.find_first_of("/\\") != std::string::npos) {
    r.fail("name", "must be a non-empty name without path separators");
  }
  if (doc.contains("description")) task.description = r.string(doc["description"], "description");
  if (doc.contains("total_time_s")) task.total_time = r.number(doc["total_time_s"], "total_time_s");
  if (!(task.total_time > 0.0)) r.fail("total_time_s", "must be positive");
  if (doc.contains("gravity")) task.gravity = r.vec3(doc["gravity"], "gravity");
  if (doc.contains("resample_count")) task.resample_count = r.integer(doc["resample_count"], "resample_count");
  if (task.resample_count < 2) r.fail("resample_count", "must be >= 2");

  const json& obj = doc["object"];
  r.object(obj, "object", {"mass", "inertia"}, {"extents"});
  task.object.mass = r.number(obj["mass"], "object.mass");
  task.object.inertia = r.inertia(obj["inertia"], "object.inertia");
  if (obj.contains("extents")) task.object.extents = r.vec3(obj["extents"], "object.extents");
  try {
    task.object.validate();
  } catch (const std::invalid_argument& e) {
    r.fail("object", e.what());
  }

  const json& wps = doc["object_waypoints"];
  if (!wps.is_array() || wps.size() < 2) r.fail("object_waypoints", "expected at least two waypoints");
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const std::string p = index_path("object_waypoints", i);
    r.object(wps[i], p, {"t", "translation", "quaternion"});
    task.keyframe_times.push_back(r.number(wps[i]["t"], p + ".t"));
    task.keyframe_poses.push_back(
        {r.quaternion(wps[i]["quaternion"], p + ".quaternion"), r.vec3(wps[i]["translation"], p + ".translation")});
  }
  if (task.keyframe_times.back() != task.total_time) {
    r.fail("object_waypoints", "last waypoint time must equal total_time_s");
  }
  try {
    (void)task.keyframes();
  } catch (const std::invalid_argument& e) {
    r.fail("object_waypoints", e.what());
  }

  const bool has_list = doc.contains("grasps");
  const bool has_sweep = doc.contains("sweep");
  if (has_list == has_sweep) r.fail("", "exactly one of 'grasps' or 'sweep' is required");
  if (has_list) {
    task.grasps = grasp_list(r, doc["grasps"], "grasps");
  } else {
    const json& sw = doc["sweep"];
    r.object(sw, "sweep", {"start", "end", "count"});
    GraspSweep sweep{r.pose(sw["start"], "sweep.start"), r.pose(sw["end"], "sweep.end"),
                     r.integer(sw["count"], "sweep.count")};
    if (sweep.count < 2) r.fail("sweep.count", "must be >= 2");
    task.grasps = generate_grasp_sweep(sweep.start, sweep.end, sweep.count);
    task.sweep = sweep;
  }

  if (doc.contains("ik")) {
    const json& ik = doc["ik"];
    r.object(ik, "ik", {}, {"seed", "position_only", "centering_gain"});
    if (ik.contains("seed")) task.ik_seed = r.vector(ik["seed"], "ik.seed");
    if (ik.contains("position_only")) task.position_only = r.boolean(ik["position_only"], "ik.position_only");
    if (ik.contains("centering_gain")) {
      task.centering_gain = r.number(ik["centering_gain"], "ik.centering_gain");
      if (!(*task.centering_gain >= 0.0 && *task.centering_gain <= 1.0)) r.fail("ik.centering_gain", "must lie in [0, 1]");
    }
  }
  return task;
}

IkSettings TaskSpec::ik_settings(IkSettings base) const {
  if (ik_seed) base.seed = ik_seed;
  base.position_only = base.position_only || position_only;
  if (centering_gain) base.centering_gain = *centering_gain;
  return base;
}

TaskSpec load_task(const std::filesystem::path& path) { return parse_task(read_file(path), path.string()); }

std::string task_to_json(const TaskSpec& task) {
  ojson doc;
  doc["schema_version"] = kSchemaVersion;
  doc["name"] = task.name;
  if (!task.description.empty()) doc["description"] = task.description;
  doc["total_time_s"] = task.total_time;
  doc["gravity"] = vec_json(task.gravity);
  ojson obj;
  obj["mass"] = task.object.mass;
  obj["inertia"] = inertia_json(task.object.inertia);
  obj["extents"] = vec_json(task.object.extents);
  doc["object"] = obj;
  doc["object_waypoints"] = ojson::array();
  for (std::size_t i = 0; i < task.keyframe_times.size(); ++i) {
    ojson w;
    w["t"] = task.keyframe_times[i];
    const ojson p = pose_json(task.keyframe_poses[i]);
    w["translation"] = p["translation"];
    w["quaternion"] = p["quaternion"];
    doc["object_waypoints"].push_back(w);
  }
  if (task.sweep) {
    ojson sw;
    sw["start"] = pose_json(task.sweep->start);
    sw["end"] = pose_json(task.sweep->end);
    sw["count"] = task.sweep->count;
    doc["sweep"] = sw;
  } else {
    doc["grasps"] = ojson::array();
    for (const GraspCandidate& g : task.grasps) doc["grasps"].push_back(grasp_json(g));
  }
  doc["resample_count"] = task.resample_count;
  ojson ik = ojson::object();
  if (task.ik_seed) ik["seed"] = vec_json(*task.ik_seed);
  ik["position_only"] = task.position_only;
  if (task.centering_gain) ik["centering_gain"] = *task.centering_gain;
  doc["ik"] = ik;
  return doc.dump(2) + "\n";
}

std::vector<GraspCandidate> parse_grasps(std::string_view text, const std::string& source) {
  const Reader r(source);
  const json doc = r.parse(text);
  r.version(doc);
  r.object(doc, "", {"schema_version", "grasps"});
  return grasp_list(r, doc["grasps"], "grasps");
}

std::vector<GraspCandidate> load_grasps(const std::filesystem::path& path) {
  return parse_grasps(read_file(path), path.string());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot write file");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<ObjectiveRecord> parse_scorecards_csv(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  const auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(s);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  if (!std::getline(in, line)) throw InputError(source + ": empty scorecards file");
  const std::vector<std::string> header = split(line);
  const auto column = [&](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InputError(source + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_id = column("grasp_id"), c_feasible = column("feasible"), c_tov = column("H_TOV"),
                    c_tme = column("H_TME"), c_tem = column("H_TEM");
  std::vector<ObjectiveRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw InputError(source + ": line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                       " columns");
    }
    ObjectiveRecord rec;
    rec.id = cells[c_id];
    rec.feasible = cells[c_feasible] == "true";
    if (rec.feasible) {
      try {
        rec.scalars = {std::stod(cells[c_tov]), std::stod(cells[c_tme]), std::stod(cells[c_tem])};
      } catch (const std::exception&) {
        throw InputError(source + ": line " + std::to_string(line_no) + ": malformed metric value");
      }
    }
    records.push_back(rec);
  }
  if (records.empty()) throw InputError(source + ": no grasp rows");
  return records;
}

}  // namespace postgrasp
