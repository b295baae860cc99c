// Scenario runner for the decoupled thrust-vector / yaw attitude controller
// and its two full-attitude baselines.

#include <CLI11.hpp>

#include "s2s1/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"quadrotor attitude control simulator on S^2 x S^1"};
  app.require_subcommand(1);

  s2s1::RunManifest mf;
  double dt = 0.0;
  double t_final = 0.0;
  std::uint64_t seed = 0;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", mf.scenario_path, "scenario file")->required();
    cmd->add_option("--out", mf.out_dir, "output directory");
    cmd->add_option("--controller", mf.controller_overrides,
                    "controller override (repeatable): s2s1, so3_continuous, "
                    "quaternion_discontinuous");
    cmd->add_option("--dt", dt, "time step override [s]");
    cmd->add_option("--t-final", t_final, "horizon override [s]");
    cmd->add_option("--seed", seed, "RNG seed override");
  };

  CLI::App* run = app.add_subcommand("run", "run the scenario, write traces and metrics");
  add_common(run);
  CLI::App* compare =
      app.add_subcommand("compare", "run all controllers and write a comparison report");
  add_common(compare);
  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in numerical checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return (code == 0) ? 0 : s2s1::kExitConfig;
  }

  const auto fill_overrides = [&](CLI::App* cmd) {
    if (cmd->count("--dt")) mf.dt = dt;
    if (cmd->count("--t-final")) mf.t_final = t_final;
    if (cmd->count("--seed")) mf.seed = seed;
  };

  if (run->parsed()) {
    fill_overrides(run);
    return s2s1::cmd_run(mf);
  }
  if (compare->parsed()) {
    fill_overrides(compare);
    return s2s1::cmd_compare(mf);
  }
  if (selftest->parsed()) {
    return s2s1::cmd_selftest();
  }
  return s2s1::kExitConfig;
}
