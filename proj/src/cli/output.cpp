#include "fourbar/cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <locale>
#include <sstream>

namespace fourbar::cli {

namespace {

std::string format_with(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

const char* boolean(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string format_number(double v) { return format_with(v, 17); }

std::vector<CompareRow> compare_rows(const std::vector<ScopSample<double>>& min_wrench,
                                     const std::vector<ScopSample<double>>& min_torque, double weight) {
  std::vector<CompareRow> rows;
  const std::size_t n = std::min(min_wrench.size(), min_torque.size());
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = min_wrench[i];
    const auto& b = min_torque[i];
    rows.push_back({a.xi, a.dxi_deg, a.wrenches.f_R.fy / weight, b.wrenches.f_R.fy / weight,
                    std::abs(a.eta[1]), std::abs(b.eta[1])});
  }
  return rows;
}

std::string sweep_csv(const std::vector<ScopSample<double>>& rows) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const auto& r : rows) {
    const double fields[] = {r.xi,
                             r.dxi_deg,
                             r.com_x,
                             r.scop[0].value,
                             r.scop[1].value,
                             r.eta[0],
                             r.eta[1],
                             r.wrenches.f_L.fx,
                             r.wrenches.f_L.fy,
                             r.wrenches.f_L.tau_z,
                             r.wrenches.f_R.fx,
                             r.wrenches.f_R.fy,
                             r.wrenches.f_R.tau_z,
                             r.tau(0),
                             r.tau(1),
                             r.tau(2),
                             r.tau(3)};
    for (double v : fields) {
      out += format_number(v);
      out += ',';
    }
    out += boolean(r.scop[0].bounded);
    out += ',';
    out += boolean(r.scop[1].bounded);
    out += '\n';
  }
  return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string out = kCompareHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += format_number(r.xi) + ',' + format_number(r.dxi_deg) + ',' + format_number(r.fy_R_min_wrench) + ',' +
           format_number(r.fy_R_min_torque) + ',' + format_number(r.abs_eta_R_min_wrench) + ',' +
           format_number(r.abs_eta_R_min_torque) + '\n';
  }
  return out;
}

std::string svg_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                     const std::vector<double>& x, const std::vector<Series>& series, double y_clip) {
  constexpr double width = 800, height = 480;
  constexpr double left = 80, right = 170, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;

  double x_lo = x.empty() ? 0.0 : x.front(), x_hi = x.empty() ? 1.0 : x.back();
  double y_lo = std::numeric_limits<double>::infinity(), y_hi = -y_lo;
  for (const auto& s : series)
    for (double v : s.y)
      if (std::isfinite(v) && (y_clip <= 0 || std::abs(v) <= y_clip)) {
        y_lo = std::min(y_lo, v);
        y_hi = std::max(y_hi, v);
      }
  if (!(y_lo <= y_hi)) y_lo = -1, y_hi = 1;
  if (y_hi - y_lo < 1e-12) y_lo -= 0.5, y_hi += 0.5;
  if (x_hi - x_lo < 1e-12) x_hi = x_lo + 1;
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  auto px = [&](double v) { return left + (v - x_lo) / (x_hi - x_lo) * pw; };
  auto py = [&](double v) { return top + (y_hi - v) / (y_hi - y_lo) * ph; };
  auto num = [](double v) { return format_with(v, 6); };

  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n"
    << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 4.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 4.0;
    s << "<text x=\"" << num(px(xv)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << num(xv)
      << "</text>\n"
      << "<text x=\"" << left - 6 << "\" y=\"" << num(py(yv) + 4) << "\" text-anchor=\"end\">" << num(yv)
      << "</text>\n"
      << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << num(py(yv)) << "\" y2=\"" << num(py(yv))
      << "\" stroke=\"#ddd\"/>\n";
  }
  s << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">" << x_label
    << "</text>\n"
    << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << top + ph / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& ser = series[k];
    std::string points;
    auto flush = [&] {
      if (!points.empty())
        s << "<polyline fill=\"none\" stroke=\"" << ser.color << "\" stroke-width=\"1.5\" points=\"" << points
          << "\"/>\n";
      points.clear();
    };
    for (std::size_t i = 0; i < x.size() && i < ser.y.size(); ++i) {
      const double v = ser.y[i];
      if (!std::isfinite(v) || (y_clip > 0 && std::abs(v) > y_clip)) {
        flush();
        continue;
      }
      points += num(px(x[i])) + ',' + num(py(v)) + ' ';
    }
    flush();
    const double ly = top + 16 + 20.0 * static_cast<double>(k);
    s << "<line x1=\"" << left + pw + 12 << "\" x2=\"" << left + pw + 36 << "\" y1=\"" << ly << "\" y2=\"" << ly
      << "\" stroke=\"" << ser.color << "\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\">" << ser.label << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write to '" + tmp.string() + "' failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

}  // namespace fourbar::cli
