#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "s2s1/errors.hpp"
#include "s2s1/scenario_io.hpp"
#include "s2s1/simulator.hpp"
#include "s2s1/trace_io.hpp"
#include "s2s1/verification.hpp"

namespace s2s1 {

// Command implementations behind the CLI. Exit codes: 0 success,
// 2 configuration error, 3 simulation or IO error, 4 reproduction
// thresholds not met in compare mode.

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSimulation = 3;
inline constexpr int kExitReproduction = 4;

struct RunManifest {
  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::string> controller_overrides;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline ScenarioDoc load_doc(const RunManifest& mf) {
  ScenarioDoc doc = parse_scenario_file(mf.scenario_path);
  if (!mf.controller_overrides.empty()) {
    doc.controllers.clear();
    for (const auto& name : mf.controller_overrides) {
      doc.controllers.push_back(controller_from_name(name));
    }
  }
  if (mf.dt) doc.base.dt = *mf.dt;
  if (mf.t_final) doc.base.t_final = *mf.t_final;
  if (mf.seed) doc.base.seed = *mf.seed;
  validate(doc.base);
  return doc;
}

inline void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory: " + dir);
  }
}

struct ControllerRun {
  Controller controller;
  RunResult result;
};

inline std::vector<ControllerRun> run_all(const ScenarioDoc& doc, const std::string& out_dir) {
  ensure_out_dir(out_dir);
  std::vector<ControllerRun> runs;
  for (Controller c : doc.controllers) {
    ScenarioConfig cfg = doc.base;
    cfg.controller = c;
    ControllerRun run{c, run_scenario(cfg)};
    const std::string stem = out_dir + "/" + controller_name(c);
    write_text_file(stem + "_trace.csv", trace_to_csv(run.result.trace));
    write_text_file(stem + "_metrics.json", metrics_to_json(run.result.metrics).dump(2) + "\n");
    runs.push_back(std::move(run));
  }
  return runs;
}

inline double max_abs_yaw(const std::vector<TraceRecord>& trace) {
  double m = 0.0;
  for (const TraceRecord& r : trace) m = std::max(m, std::abs(r.psi));
  return m;
}

/// PASS/FAIL against the reproduction thresholds for one controller run.
inline bool reproduction_pass(Reproduction tag, Controller c, const RunResult& run,
                              std::string& detail_out) {
  const MetricsSummary& m = run.metrics;
  const TraceRecord& last = run.trace.back();
  const double x_err_end = std::abs(last.p.x() - 1.0);
  std::ostringstream os;
  bool ok = true;
  if (tag == Reproduction::kFig3) {
    const double psi_max = max_abs_yaw(run.trace);
    ok = m.max_abs_y < 1e-6 && psi_max < 1e-6 && x_err_end < 0.01;
    os << "max|y|=" << m.max_abs_y << " max|psi|=" << psi_max << " |x_end-1|=" << x_err_end;
  } else if (tag == Reproduction::kFig4) {
    const double y_err_end = std::abs(last.p.y());
    const double psi_end = m.final_yaw_err;
    if (c == Controller::kS2S1) {
      ok = m.max_abs_y < 1e-6 && psi_end < 0.01;
      os << "max|y|=" << m.max_abs_y << " |psi_end|=" << psi_end;
    } else {
      ok = m.max_abs_y > 0.01 && x_err_end < 0.01 && y_err_end < 0.01 && psi_end < 0.01;
      os << "max|y|=" << m.max_abs_y << " (expected > 0.01) |x_end-1|=" << x_err_end
         << " |y_end|=" << y_err_end << " |psi_end|=" << psi_end;
    }
  }
  detail_out = os.str();
  return ok;
}

}  // namespace detail

/// Run every listed controller on the scenario; write a trace and a metrics
/// file per controller.
inline int cmd_run(const RunManifest& mf) {
  try {
    const ScenarioDoc doc = detail::load_doc(mf);
    detail::run_all(doc, mf.out_dir);
    return kExitOk;
  } catch (const ConfigParse& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSimulation;
  }
}

/// Run all controllers and write a side-by-side report; in reproduction mode
/// also judge each run against the tagged thresholds.
inline int cmd_compare(const RunManifest& mf) {
  try {
    const ScenarioDoc doc = detail::load_doc(mf);
    if (doc.controllers.size() < 2) {
      throw ConfigParse("compare needs at least two controllers");
    }
    const auto runs = detail::run_all(doc, mf.out_dir);

    std::ostringstream report;
    report << "scenario: " << mf.scenario_path << "\n";
    const char* tag = doc.reproduction == Reproduction::kFig3   ? "fig3"
                      : doc.reproduction == Reproduction::kFig4 ? "fig4"
                                                                : "none";
    report << "reproduction: " << tag << "\n\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%-28s %12s %12s %10s %12s %8s %12s\n", "controller",
                  "max|y|", "max|p err|", "settle[s]", "|psi_end|", "Vw viol", "ortho drift");
    report << line;

    bool all_pass = true;
    std::vector<std::string> verdicts;
    for (const auto& run : runs) {
      const MetricsSummary& m = run.result.metrics;
      std::snprintf(line, sizeof(line), "%-28s %12.4e %12.4e %10.3f %12.4e %8ld %12.4e\n",
                    controller_name(run.controller).c_str(), m.max_abs_y, m.max_pos_err,
                    m.settle_time_x, m.final_yaw_err, m.vw_violations, m.max_ortho_drift);
      report << line;
      if (doc.reproduction != Reproduction::kNone) {
        std::string detail;
        const bool ok = detail::reproduction_pass(doc.reproduction, run.controller,
                                                  run.result, detail);
        all_pass = all_pass && ok;
        verdicts.push_back(controller_name(run.controller) + ": " +
                           (ok ? "PASS" : "FAIL") + "  (" + detail + ")");
      }
    }
    if (doc.reproduction != Reproduction::kNone) {
      report << "\n";
      for (const auto& v : verdicts) report << v << "\n";
      report << "overall: " << (all_pass ? "PASS" : "FAIL") << "\n";
    }

    const std::string text = report.str();
    write_text_file(mf.out_dir + "/report.txt", text);
    std::fputs(text.c_str(), stdout);
    if (doc.reproduction != Reproduction::kNone && !all_pass) {
      return kExitReproduction;
    }
    return kExitOk;
  } catch (const ConfigParse& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSimulation;
  }
}

/// Built-in checks: tilt convergence against its closed form, the S^1
/// Lyapunov decrease, and the chart round trip.
inline int cmd_selftest() {
  bool all_ok = true;

  for (const Theorem1Result& r : theorem1_check()) {
    const bool ok = r.passed();
    all_ok = all_ok && ok;
    std::printf("tilt closed form  xi0=%+5.2f  max err %.3e  (tol %.0e)  %s\n", r.xi0, r.max_err,
                r.tol, ok ? "PASS" : "FAIL");
  }

  const Theorem2Result t2 = theorem2_check();
  all_ok = all_ok && t2.passed();
  std::printf("S^1 Lyapunov      violations %ld  max final V %.3e  %s\n", t2.lyapunov_violations,
              t2.max_final_V, t2.passed() ? "PASS" : "FAIL");

  const ChartRoundTripResult rt = chart_roundtrip_check();
  all_ok = all_ok && rt.passed();
  std::printf("chart round trip  rot %.3e  chart %.3e  %.2fs  %s\n", rt.max_err_from_rotation,
              rt.max_err_from_chart, rt.seconds, rt.passed() ? "PASS" : "FAIL");

  return all_ok ? kExitOk : kExitReproduction;
}

}  // namespace s2s1
