#pragma once

#include <string>
#include <vector>

#include "fourbar/cli/config.hpp"
#include "fourbar/scop.hpp"

namespace fourbar::cli {

/// 17 significant digits, '.' separator, "nan"/"inf"/"-inf" for non-finite
/// values. Independent of the global locale.
std::string format_number(double v);

inline constexpr const char* kSweepHeader =
    "xi_rad,dxi_deg,com_x,scop_L,scop_R,eta_L,eta_R,fxL,fyL,tzL,fxR,fyR,tzR,"
    "tau1,tau2,tau3,tau4,bounded_L,bounded_R";

inline constexpr const char* kCompareHeader =
    "xi_rad,dxi_deg,fyR_minwrench_over_mg,fyR_mintorque_over_mg,abs_etaR_minwrench,abs_etaR_mintorque";

struct CompareRow {
  double xi;
  double dxi_deg;
  double fy_R_min_wrench;  // normalised by m g
  double fy_R_min_torque;
  double abs_eta_R_min_wrench;
  double abs_eta_R_min_torque;
};

std::vector<CompareRow> compare_rows(const std::vector<ScopSample<double>>& min_wrench,
                                     const std::vector<ScopSample<double>>& min_torque, double weight);

std::string sweep_csv(const std::vector<ScopSample<double>>& rows);
std::string compare_csv(const std::vector<CompareRow>& rows);

struct Series {
  std::string label;
  std::string color;
  std::vector<double> y;
};

/// Line plot of each series against x. Non-finite points break the polyline;
/// the y range is clipped to `y_clip` around zero when that is positive.
std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<double>& x, const std::vector<Series>& series, double y_clip = 0.0);

/// Writes through a temporary file in the same directory and renames it into
/// place. Throws IoError; never leaves a partial `path` behind.
void write_atomic(const std::string& path, const std::string& contents);

/// `path` with its extension replaced by `ext` (which includes the dot).
std::string replace_extension(const std::string& path, const std::string& ext);

}  // namespace fourbar::cli
