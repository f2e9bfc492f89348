#include "fourbar/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fourbar/cli/output.hpp"

namespace fourbar::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
  double out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out))
    throw ConfigError("config key '" + std::string(key) + "': not a number: '" + std::string(value) + "'");
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  int out = 0;
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" + std::string(value) + "'");
  return out;
}

}  // namespace

std::string_view format_name(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Svg: return "svg";
    case Format::Both: return "both";
  }
  return "csv";
}

std::optional<Format> parse_format(std::string_view s) {
  for (auto f : {Format::Csv, Format::Svg, Format::Both})
    if (s == format_name(f)) return f;
  return std::nullopt;
}

double RunConfig::xi_min() const { return xi_min_deg * kPi<double> / 180.0; }
double RunConfig::xi_max() const { return xi_max_deg * kPi<double> / 180.0; }

void RunConfig::validate() const {
  try {
    model.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (steps < 2) throw ConfigError("steps must be at least 2");
  if (!(xi_min_deg > 0.0) || !(xi_max_deg < 180.0))
    throw ConfigError("xi range must lie inside (0, 180) degrees");
  if (!(xi_min_deg < xi_max_deg)) throw ConfigError("xi_min_deg must be below xi_max_deg");
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  RunConfig c = std::move(base);
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    if (key == "l") c.model.l = parse_double(key, value);
    else if (key == "d") c.model.d = parse_double(key, value);
    else if (key == "m_l") c.model.m_l = parse_double(key, value);
    else if (key == "m_b") c.model.m_b = parse_double(key, value);
    else if (key == "g") c.model.g = parse_double(key, value);
    else if (key == "xi_min_deg") c.xi_min_deg = parse_double(key, value);
    else if (key == "xi_max_deg") c.xi_max_deg = parse_double(key, value);
    else if (key == "steps") c.steps = parse_int(key, value);
    else if (key == "out") c.out = std::string(value);
    else if (key == "criterion") {
      const auto parsed = parse_criterion(value);
      if (!parsed) throw ConfigError("unknown criterion '" + std::string(value) + "'");
      c.criterion = *parsed;
    } else if (key == "format") {
      const auto parsed = parse_format(value);
      if (!parsed) throw ConfigError("unknown format '" + std::string(value) + "'");
      c.format = *parsed;
    } else {
      throw ConfigError("unknown config key '" + std::string(key) + "'");
    }
  }
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream s;
  s << "l = " << format_number(c.model.l) << '\n'
    << "d = " << format_number(c.model.d) << '\n'
    << "m_l = " << format_number(c.model.m_l) << '\n'
    << "m_b = " << format_number(c.model.m_b) << '\n'
    << "g = " << format_number(c.model.g) << '\n'
    << "criterion = " << criterion_name(c.criterion) << '\n'
    << "xi_min_deg = " << format_number(c.xi_min_deg) << '\n'
    << "xi_max_deg = " << format_number(c.xi_max_deg) << '\n'
    << "steps = " << c.steps << '\n'
    << "out = " << c.out << '\n'
    << "format = " << format_name(c.format) << '\n';
  return s.str();
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

}  // namespace fourbar::cli
