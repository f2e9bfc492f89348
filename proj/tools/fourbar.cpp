// fourbar: contact-stability sweeps for the planar four-bar linkage.
//
//   fourbar sweep   --criterion min-torque --out torque.csv --format both
//   fourbar compare --xi-min-deg 75 --xi-max-deg 105
//   fourbar verify  --mb 3
//
// Exit codes: 0 ok, 1 verify found a failing invariant, 2 bad configuration,
// 3 output could not be written.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "fourbar/cli/commands.hpp"
#include "fourbar/cli/config.hpp"

namespace {

struct Overrides {
  std::string config_path, out, format, criterion;
  double xi_min_deg = 0, xi_max_deg = 0, l = 0, d = 0, m_l = 0, m_b = 0, g = 0;
  int steps = 0;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace fourbar::cli;

  CLI::App app{"Static center-of-pressure analysis of a planar four-bar linkage"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  auto* opt_config = app.add_option("--config", o.config_path, "key = value configuration file");
  auto* opt_out = app.add_option("--out", o.out, "CSV output path; an SVG goes next to it");
  auto* opt_format = app.add_option("--format", o.format, "csv, svg or both");
  auto* opt_criterion = app.add_option("--criterion", o.criterion, "min-wrench, min-torque or min-tangential");
  auto* opt_xi_min = app.add_option("--xi-min-deg", o.xi_min_deg, "sweep start [deg]");
  auto* opt_xi_max = app.add_option("--xi-max-deg", o.xi_max_deg, "sweep end [deg]");
  auto* opt_steps = app.add_option("--steps", o.steps, "grid points");
  auto* opt_l = app.add_option("--l", o.l, "leg length [m]");
  auto* opt_d = app.add_option("--d", o.d, "upper-rod length [m]");
  auto* opt_ml = app.add_option("--ml", o.m_l, "leg mass [kg]");
  auto* opt_mb = app.add_option("--mb", o.m_b, "upper-rod mass [kg]");
  auto* opt_g = app.add_option("--g", o.g, "gravity [m/s^2]");

  auto* sweep = app.add_subcommand("sweep", "SCoP, sensitivity, wrenches and torques over xi");
  auto* compare = app.add_subcommand("compare", "minimum-norm against minimum-torque on foot R");
  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  bool corrupt = false;
  verify->add_flag("--corrupt-mbj", corrupt, "perturb the coupling block (negative control)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kConfigError);
  }

  RunConfig config;
  try {
    if (*opt_config) config = load_config_file(o.config_path);
    if (*opt_out) config.out = o.out;
    if (*opt_format) {
      const auto f = parse_format(o.format);
      if (!f) throw ConfigError("unknown format '" + o.format + "'");
      config.format = *f;
    }
    if (*opt_criterion) {
      const auto c = fourbar::parse_criterion(o.criterion);
      if (!c) throw ConfigError("unknown criterion '" + o.criterion + "'");
      config.criterion = *c;
    }
    if (*opt_xi_min) config.xi_min_deg = o.xi_min_deg;
    if (*opt_xi_max) config.xi_max_deg = o.xi_max_deg;
    if (*opt_steps) config.steps = o.steps;
    if (*opt_l) config.model.l = o.l;
    if (*opt_d) config.model.d = o.d;
    if (*opt_ml) config.model.m_l = o.m_l;
    if (*opt_mb) config.model.m_b = o.m_b;
    if (*opt_g) config.model.g = o.g;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  if (*sweep) return run_sweep(config, std::cerr);
  if (*compare) return run_compare(config, std::cerr);
  return run_verify(config, std::cout, VerifyOptions{corrupt});
}
