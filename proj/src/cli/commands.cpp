#include "fourbar/cli/commands.hpp"

#include <ostream>

#include "fourbar/cli/output.hpp"
#include "fourbar/scop.hpp"

namespace fourbar::cli {

namespace {

std::string output_path(const RunConfig& c, const char* command) {
  return c.out.empty() ? std::string(command) + ".csv" : c.out;
}

bool wants_csv(Format f) { return f != Format::Svg; }
bool wants_svg(Format f) { return f != Format::Csv; }

std::vector<double> column(const std::vector<ScopSample<double>>& rows, double (*get)(const ScopSample<double>&)) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(get(r));
  return out;
}

// Runs `body`, mapping library and I/O failures onto exit codes.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const IoError& e) {
    log << "i/o error: " << e.what() << '\n';
    return kIoError;
  } catch (const fourbar::Error& e) {
    log << "config error: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace

int run_sweep(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto rows = sweep(config.xi_min(), config.xi_max(), config.steps, config.model, config.criterion);
    const std::string path = output_path(config, "sweep");

    if (wants_csv(config.format)) {
      write_atomic(path, sweep_csv(rows));
      log << "wrote " << path << " (" << rows.size() << " rows)\n";
    }
    if (wants_svg(config.format)) {
      const auto x = column(rows, [](const ScopSample<double>& r) { return r.dxi_deg; });
      const std::vector<Series> series = {
          {"SCoP_L", "#1f77b4", column(rows, [](const ScopSample<double>& r) { return r.scop[0].value; })},
          {"SCoP_R", "#d62728", column(rows, [](const ScopSample<double>& r) { return r.scop[1].value; })},
          {"CoM x", "#2ca02c", column(rows, [](const ScopSample<double>& r) { return r.com_x; })}};
      const std::string svg_path = replace_extension(path, ".svg");
      write_atomic(svg_path, svg_plot(std::string("Static CoP, ") + std::string(criterion_name(config.criterion)),
                                      "xi - 90 [deg]", "[m]", x, series, 1.0));
      log << "wrote " << svg_path << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int run_compare(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    config.validate();
    const auto a = sweep(config.xi_min(), config.xi_max(), config.steps, config.model, Criterion::MinWrenchNorm);
    const auto b = sweep(config.xi_min(), config.xi_max(), config.steps, config.model, Criterion::MinJointTorqueNorm);
    const auto rows = compare_rows(a, b, config.model.weight());
    const std::string path = output_path(config, "compare");

    if (wants_csv(config.format)) {
      write_atomic(path, compare_csv(rows));
      log << "wrote " << path << " (" << rows.size() << " rows)\n";
    }
    if (wants_svg(config.format)) {
      std::vector<double> x, fw, ft, ew, et;
      for (const auto& r : rows) {
        x.push_back(r.dxi_deg);
        fw.push_back(r.fy_R_min_wrench);
        ft.push_back(r.fy_R_min_torque);
        ew.push_back(r.abs_eta_R_min_wrench);
        et.push_back(r.abs_eta_R_min_torque);
      }
      const std::string force_path = replace_extension(path, ".svg");
      write_atomic(force_path, svg_plot("Vertical force on foot R / mg", "xi - 90 [deg]", "fy / mg", x,
                                        {{"min-wrench", "#1f77b4", fw}, {"min-torque", "#d62728", ft}}, 2.0));
      log << "wrote " << force_path << '\n';
      const std::string eta_path = replace_extension(path, "") + "_sensitivity.svg";
      write_atomic(eta_path, svg_plot("|eta| on foot R", "xi - 90 [deg]", "[m/rad]", x,
                                      {{"min-wrench", "#1f77b4", ew}, {"min-torque", "#d62728", et}}, 5.0));
      log << "wrote " << eta_path << '\n';
    }
    return static_cast<int>(kOk);
  });
}

int run_verify(const RunConfig& config, std::ostream& out, const VerifyOptions& options) {
  return guarded(out, [&] {
    config.validate();
    const auto results = verify_invariants(config, options);
    int failed = 0, skipped = 0;
    for (const auto& r : results) {
      const char* tag = r.status == Status::Pass ? "PASS   " : r.status == Status::Fail ? "FAIL   " : "SKIPPED";
      out << tag << "  " << r.name << "  worst=" << format_number(r.worst) << "  tol=" << format_number(r.tolerance);
      if (!r.note.empty()) out << "  (" << r.note << ')';
      out << '\n';
      failed += r.status == Status::Fail;
      skipped += r.status == Status::Skipped;
    }
    out << results.size() << " invariants: " << results.size() - failed - skipped << " passed, " << failed
        << " failed, " << skipped << " skipped\n";
    return failed == 0 ? static_cast<int>(kOk) : static_cast<int>(kVerifyFailed);
  });
}

}  // namespace fourbar::cli
