#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "s2s1/errors.hpp"
#include "s2s1/simulator.hpp"

namespace s2s1 {

// Trace CSV (floats at 17 significant digits) and the metrics summary as JSON.

inline constexpr const char* kTraceHeader =
    "t,px,py,pz,vx,vy,vz,"
    "r1x,r1y,r1z,r2x,r2y,r2z,r3x,r3y,r3z,"
    "psi,T,omega_x,omega_y,omega_z,w1,w2,xi,V_w,pos_err";

namespace detail {
inline void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}
}  // namespace detail

inline std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::string out;
  out.reserve(trace.size() * 26 * 12 + 256);
  out += kTraceHeader;
  out += '\n';
  for (const TraceRecord& r : trace) {
    double cols[26] = {r.t,
                       r.p.x(), r.p.y(), r.p.z(),
                       r.v.x(), r.v.y(), r.v.z(),
                       r.R(0, 0), r.R(1, 0), r.R(2, 0),
                       r.R(0, 1), r.R(1, 1), r.R(2, 1),
                       r.R(0, 2), r.R(1, 2), r.R(2, 2),
                       r.psi, r.T,
                       r.omega.x(), r.omega.y(), r.omega.z(),
                       r.w1, r.w2, r.xi, r.V_w, r.pos_err};
    for (int i = 0; i < 26; ++i) {
      if (i > 0) out += ',';
      detail::append_num(out, cols[i]);
    }
    out += '\n';
  }
  return out;
}

inline nlohmann::json metrics_to_json(const MetricsSummary& m) {
  return nlohmann::json{{"max_abs_y", m.max_abs_y},
                        {"max_pos_err", m.max_pos_err},
                        {"settle_time_x", m.settle_time_x},
                        {"final_yaw_err", m.final_yaw_err},
                        {"vw_violations", m.vw_violations},
                        {"max_ortho_drift", m.max_ortho_drift}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path);
  }
  out << content;
  if (!out) {
    throw IoError("write failed: " + path);
  }
}

}  // namespace s2s1
