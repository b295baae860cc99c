#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "s2s1/errors.hpp"
#include "s2s1/simulator.hpp"

namespace s2s1 {

// Scenario files: ini-style sections of key = value lines, '#' comments.
// Unknown sections, keys, or controller names are hard errors; missing keys
// fall back to the documented defaults.

enum class Reproduction { kNone, kFig3, kFig4 };

struct ScenarioDoc {
  ScenarioConfig base;
  std::vector<Controller> controllers = {Controller::kS2S1};
  Reproduction reproduction = Reproduction::kNone;
};

inline Controller controller_from_name(const std::string& name) {
  if (name == "s2s1") return Controller::kS2S1;
  if (name == "so3_continuous") return Controller::kSo3Continuous;
  if (name == "quaternion_discontinuous") return Controller::kQuaternionDiscontinuous;
  throw ConfigParse("unknown controller: " + name);
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

inline double parse_num(const std::string& key, const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigParse(key + ": not a number: '" + s + "'");
  }
}

inline Vec3 parse_vec3(const std::string& key, const std::string& s) {
  const auto parts = split_list(s);
  if (parts.size() != 3) throw ConfigParse(key + ": expected three numbers");
  return Vec3(parse_num(key, parts[0]), parse_num(key, parts[1]), parse_num(key, parts[2]));
}

}  // namespace detail

inline ScenarioDoc parse_scenario_text(const std::string& text) {
  using detail::parse_num;
  using detail::parse_vec3;
  using detail::split_list;
  using detail::trim;

  ScenarioDoc doc;
  std::string section;
  std::string ref_type = "setpoint";
  Vec3 ref_position = Vec3::Zero();
  double ref_yaw = 0.0;
  Vec3 ref_center = Vec3::Zero();
  double ref_radius = 1.0;
  double ref_rate = 1.0;
  double ref_yaw_rate = 0.0;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigParse("line " + std::to_string(lineno) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "run" && section != "sim" && section != "vehicle" && section != "outer" &&
          section != "inner" && section != "baseline" && section != "initial" &&
          section != "reference") {
        throw ConfigParse("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigParse("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qkey = section + "." + key;

    ScenarioConfig& c = doc.base;
    if (qkey == "run.controllers") {
      doc.controllers.clear();
      for (const auto& name : split_list(value)) doc.controllers.push_back(controller_from_name(name));
      if (doc.controllers.empty()) throw ConfigParse("run.controllers: empty list");
    } else if (qkey == "run.reproduction") {
      if (value == "none") doc.reproduction = Reproduction::kNone;
      else if (value == "fig3") doc.reproduction = Reproduction::kFig3;
      else if (value == "fig4") doc.reproduction = Reproduction::kFig4;
      else throw ConfigParse("run.reproduction: unknown tag '" + value + "'");
    } else if (qkey == "run.seed") {
      c.seed = static_cast<std::uint64_t>(parse_num(qkey, value));
    } else if (qkey == "sim.dt") {
      c.dt = parse_num(qkey, value);
    } else if (qkey == "sim.t_final") {
      c.t_final = parse_num(qkey, value);
    } else if (qkey == "vehicle.mass") {
      c.m = parse_num(qkey, value);
    } else if (qkey == "vehicle.gravity") {
      c.g = parse_num(qkey, value);
    } else if (qkey == "vehicle.max_thrust") {
      c.thrust_max = parse_num(qkey, value);
    } else if (qkey == "outer.kp") {
      c.outer.kp = parse_num(qkey, value);
    } else if (qkey == "outer.kv") {
      c.outer.kv = parse_num(qkey, value);
    } else if (qkey == "outer.sat_eps_frac") {
      c.sat_eps_frac = parse_num(qkey, value);
    } else if (qkey == "inner.k1") {
      c.inner.k1 = parse_num(qkey, value);
    } else if (qkey == "inner.k2") {
      c.inner.k2 = parse_num(qkey, value);
    } else if (qkey == "baseline.kq") {
      c.baseline.kq = parse_num(qkey, value);
    } else if (qkey == "baseline.K") {
      c.baseline.K = parse_num(qkey, value) * Mat3::Identity();
    } else if (qkey == "baseline.k_so3") {
      c.baseline.k = parse_vec3(qkey, value);
    } else if (qkey == "initial.position") {
      c.p0 = parse_vec3(qkey, value);
    } else if (qkey == "initial.velocity") {
      c.v0 = parse_vec3(qkey, value);
    } else if (qkey == "initial.yaw") {
      c.psi0 = parse_num(qkey, value);
    } else if (qkey == "initial.tilt_axis") {
      c.tilt_axis = parse_vec3(qkey, value);
    } else if (qkey == "initial.tilt_angle") {
      if (value == "random") {
        c.random_tilt = true;
      } else {
        c.tilt_angle = parse_num(qkey, value);
      }
    } else if (qkey == "reference.type") {
      if (value != "setpoint" && value != "circle" && value != "yaw_ramp") {
        throw ConfigParse("reference.type: unknown type '" + value + "'");
      }
      ref_type = value;
    } else if (qkey == "reference.position") {
      ref_position = parse_vec3(qkey, value);
    } else if (qkey == "reference.yaw") {
      ref_yaw = parse_num(qkey, value);
    } else if (qkey == "reference.center") {
      ref_center = parse_vec3(qkey, value);
    } else if (qkey == "reference.radius") {
      ref_radius = parse_num(qkey, value);
    } else if (qkey == "reference.rate") {
      ref_rate = parse_num(qkey, value);
    } else if (qkey == "reference.yaw_rate") {
      ref_yaw_rate = parse_num(qkey, value);
    } else {
      throw ConfigParse("line " + std::to_string(lineno) + ": unknown key '" + qkey + "'");
    }
  }

  if (ref_type == "setpoint") {
    doc.base.reference = std::make_shared<SetpointReference>(ref_position, ref_yaw);
  } else if (ref_type == "circle") {
    doc.base.reference = std::make_shared<CircleReference>(ref_center, ref_radius, ref_rate, ref_yaw);
  } else {
    doc.base.reference = std::make_shared<YawRampReference>(ref_position, ref_yaw, ref_yaw_rate);
  }
  validate(doc.base);
  return doc;
}

inline ScenarioDoc parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigParse("cannot open scenario file: " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario_text(ss.str());
  } catch (const ConfigParse& e) {
    throw ConfigParse(path + ": " + e.what());
  }
}

}  // namespace s2s1
