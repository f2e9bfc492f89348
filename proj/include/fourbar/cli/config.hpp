#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fourbar/model.hpp"
#include "fourbar/wrench_resolution.hpp"

namespace fourbar::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Svg, Both };

std::string_view format_name(Format f);
std::optional<Format> parse_format(std::string_view s);

struct RunConfig {
  ModelParams<double> model;
  Criterion criterion = Criterion::MinWrenchNorm;
  double xi_min_deg = 70.0;
  double xi_max_deg = 110.0;
  int steps = 401;
  std::string out;  // empty: "<command>.csv" in the working directory
  Format format = Format::Csv;

  double xi_min() const;
  double xi_max() const;

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

/// Flat `key = value` text, one entry per line; '#' starts a comment.
/// Unknown keys and malformed values throw ConfigError.
RunConfig parse_config(std::string_view text, RunConfig base = {});

/// Inverse of parse_config: every key, 17 significant digits.
std::string emit_config(const RunConfig& config);

RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace fourbar::cli
