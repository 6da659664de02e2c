#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mafoliate/point.hpp"

namespace mafoliate::cli {

/// Every tunable of a run. Precedence: defaults, then --config, then flags.
struct RunConfig {
  std::string poly;
  std::string out_dir;
  std::uint64_t seed = 1;
  bool strict = false;

  double eps_d = 1e-10;
  double tol_type = 1e-8;
  double tol_ext = 1e-7;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int m_max = 8;
  double ma_threshold = 1e-9;

  int grid = 24;
  int samples = 200;
  int degree = 2;
  int trials = 1000;

  std::string point = "0.6,0.2,0.5,-0.4";
  double t_max = 0.5;
  double s_max = 0.5;
  double h = 0.05;
  double r1 = 1.0;
  double r2 = 2.0;
};

/// Applies the keys of a JSON object to `cfg`; unknown keys are input errors.
void apply_config(RunConfig& cfg, const nlohmann::json& doc);

/// Parses "x1,y1,x2,y2".
Point parse_point(const std::string& text);

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolated = 1;
inline constexpr int kExitInputError = 2;

/// Runs one subcommand. JSON goes to `out` (and to --out when given),
/// diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace mafoliate::cli
