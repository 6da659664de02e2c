#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "mafoliate/corpus.hpp"
#include "mafoliate/errors.hpp"
#include "mafoliate/finite_type.hpp"
#include "mafoliate/foliation.hpp"
#include "mafoliate/monge_ampere.hpp"
#include "mafoliate/serialization.hpp"

namespace mafoliate::cli {

namespace {

nlohmann::json point_json(const Point& q) { return {q.z1.real(), q.z1.imag(), q.z2.real(), q.z2.imag()}; }

nlohmann::json error_json(const Error& e) {
  return {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
}

/// Outcome of one analysis: the JSON payload and whether it records a
/// violated property.
struct Outcome {
  nlohmann::json result;
  bool violated = false;
  std::string csv;
};

HermitianPolynomial load_poly(const RunConfig& cfg) {
  if (cfg.poly.empty()) throw Error(ErrorKind::InvalidInput, "--poly is required");
  if (std::filesystem::exists(cfg.poly)) return load_polynomial_file(cfg.poly);
  for (const std::string& name : corpus::names()) {
    if (cfg.poly == name) return corpus::by_name(name);
  }
  throw Error(ErrorKind::InvalidInput, "no polynomial file or corpus member named '" + cfg.poly + "'");
}

FlowConfig flow_config(const RunConfig& cfg) {
  FlowConfig fc;
  fc.abs_tol = cfg.abs_tol;
  fc.rel_tol = cfg.rel_tol;
  fc.eps_D = cfg.eps_d;
  fc.extension.eps_D = cfg.eps_d;
  fc.extension.tol_ext = cfg.tol_ext;
  return fc;
}

void validate(const RunConfig& cfg) {
  for (double v : {cfg.eps_d, cfg.tol_type, cfg.tol_ext, cfg.abs_tol, cfg.rel_tol, cfg.ma_threshold, cfg.h, cfg.r1,
                   cfg.r2}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidInput, "tolerances and levels must be positive");
  }
  if (cfg.m_max < 2 || cfg.grid < 2 || cfg.samples < 1 || cfg.degree < 0 || cfg.trials < 1) {
    throw Error(ErrorKind::InvalidInput, "counts out of range");
  }
  if (cfg.t_max < 0.0 || cfg.s_max < 0.0) throw Error(ErrorKind::InvalidInput, "t-max and s-max must be >= 0");
}

/// Sphere-slice grid: z = (cos a, sin a e^{ib}) with a in [0, pi/2] and
/// b in [0, 2 pi), N values each.
Outcome check_ma(const HermitianPolynomial& p, const RunConfig& cfg) {
  const Exhaustion ex(p);
  const int n = cfg.grid;
  std::ostringstream csv;
  csv.precision(17);
  csv << "x1,y1,x2,y2,rho,D,B,residual,normalized\n";
  double worst = 0.0;
  Point worst_point;
  int counted = 0;
  for (int i = 0; i < n; ++i) {
    const double a = 0.5 * M_PI * i / (n - 1);
    for (int j = 0; j < n; ++j) {
      const double b = 2.0 * M_PI * j / n;
      const Point q{std::cos(a), std::polar(std::sin(a), b)};
      const WirtingerJet jet = ex.jet(q);
      if (!(jet.rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "rho <= 0 on the unit sphere");
      const MAReport r = ma_residual(jet);
      const auto x = q.real_coords();
      csv << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ',' << r.rho << ',' << r.D << ',' << r.B << ','
          << r.residual << ',' << r.normalized << '\n';
      if (jet.D <= cfg.eps_d) continue;
      ++counted;
      if (std::abs(r.normalized) > worst) {
        worst = std::abs(r.normalized);
        worst_point = q;
      }
    }
  }
  Outcome o;
  o.csv = csv.str();
  o.violated = worst >= cfg.ma_threshold;
  o.result = {{"grid", n},
              {"points", n * n},
              {"nondegenerate_points", counted},
              {"max_abs_normalized", worst},
              {"worst_point", point_json(worst_point)},
              {"threshold", cfg.ma_threshold},
              {"is_ma", !o.violated}};
  return o;
}

Outcome gradient(const HermitianPolynomial& p, const RunConfig& cfg) {
  const Exhaustion ex(p);
  const Point q = parse_point(cfg.point);
  const WirtingerJet jet = ex.jet(q);
  if (!(jet.rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "rho must be positive at the point");
  Outcome o;
  o.result["point"] = point_json(q);
  o.result["D"] = jet.D;
  if (jet.D > cfg.eps_d) {
    o.result["gradient"] = to_json(complex_gradient(jet, cfg.eps_d));
    o.result["extended"] = false;
  } else {
    const ExtendedGradient ext = extend_gradient(ex, q, flow_config(cfg).extension);
    o.result["gradient"] = to_json(ext.gradient);
    o.result["extended"] = true;
    o.result["ray_spread"] = ext.spread;
  }
  return o;
}

Outcome type_at(const HermitianPolynomial& p, const RunConfig& cfg) {
  Outcome o;
  o.result = to_json(point_type(p, parse_point(cfg.point), cfg.m_max, cfg.tol_type));
  return o;
}

Outcome trace(const HermitianPolynomial& p, const RunConfig& cfg) {
  LeafGrid grid;
  grid.t_min = 0.0;
  grid.t_max = cfg.t_max;
  grid.s_min = 0.0;
  grid.s_max = cfg.s_max;
  grid.h = cfg.h;
  const Point seed = parse_point(cfg.point);
  const LeafTrace tr = trace_leaf(p, seed, grid, flow_config(cfg));
  Outcome o;
  o.csv = leaf_trace_csv(tr);
  o.result = {{"seed", point_json(seed)},
              {"grid", {{"t_max", grid.t_max}, {"s_max", grid.s_max}, {"h", grid.h}}},
              {"nodes", grid.nt() * grid.ns()},
              {"diagnostics", to_json(leaf_diagnostics(tr))}};
  return o;
}

Outcome burns(const HermitianPolynomial& p, const RunConfig& cfg) {
  BurnsOptions opts;
  opts.seed = cfg.seed;
  opts.ma_threshold = cfg.ma_threshold;
  const BurnsVerdict v = burns_verify(p, opts);
  Outcome o;
  o.result = to_json(v);
  o.violated = v.violated;
  return o;
}

std::vector<Point> nondegenerate_samples(const HermitianPolynomial& p, const RunConfig& cfg) {
  const Exhaustion ex(p);
  std::vector<Point> out;
  for (const Point& q : sphere_samples(static_cast<std::size_t>(cfg.samples), 1.0, cfg.seed)) {
    const WirtingerJet jet = ex.jet(q);
    if (jet.rho > 0.0 && jet.D > cfg.eps_d) out.push_back(q);
  }
  return out;
}

Outcome weights(const HermitianPolynomial& p, const RunConfig& cfg) {
  const HolomorphicFit fit = fit_holomorphic_Z(p, nondegenerate_samples(p, cfg), cfg.degree, cfg.eps_d);
  Outcome o;
  o.result["fit"] = to_json(fit);
  o.result["zero_set"] = to_json(zero_set_check(fit, 1.0));
  const WeightEstimate w = estimate_weights(fit);
  o.result["weights"] = to_json(w);
  if (w.c1 > 0.0 && w.c2 > 0.0) {
    const double defect = weighted_homogeneity_check(p, w.c1, w.c2, cfg.trials, cfg.seed);
    o.result["homogeneity_defect"] = defect;
    o.violated = !(defect < 1e-8);
  } else {
    o.result["homogeneity_defect"] = nullptr;
    o.violated = true;
  }
  return o;
}

Outcome transport(const HermitianPolynomial& p, const RunConfig& cfg) {
  const std::vector<Point> pts =
      sample_level_set(p, cfg.r1, static_cast<std::size_t>(std::min(cfg.samples, 32)), cfg.seed);
  const TransportReport r = level_transport(p, cfg.r1, cfg.r2, pts, flow_config(cfg));
  Outcome o;
  o.result = to_json(r);
  o.violated = !(r.max_landing_defect < 1e-8) || !(r.max_round_trip < 1e-7);
  return o;
}

/// Full pipeline. Each section records its own error instead of aborting, so
/// one inapplicable analysis does not hide the others.
Outcome report(const HermitianPolynomial& p, const RunConfig& cfg) {
  Outcome o;
  o.result["polynomial"] = to_json(p);
  auto section = [&](const char* name, const std::function<Outcome()>& run) {
    try {
      Outcome s = run();
      o.result[name] = s.result;
      o.violated = o.violated || s.violated;
    } catch (const Error& e) {
      o.result[name] = error_json(e);
    }
  };
  section("check_ma", [&] { return check_ma(p, cfg); });
  section("gradient", [&] { return gradient(p, cfg); });
  section("type", [&] { return type_at(p, cfg); });
  section("leaf", [&] { return trace(p, cfg); });
  section("burns", [&] { return burns(p, cfg); });
  section("weights", [&] { return weights(p, cfg); });
  section("transport", [&] { return transport(p, cfg); });
  return o;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  f << text;
}

} // namespace

Point parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "bad point coordinate '" + item + "'");
    }
  }
  if (v.size() != 4) throw Error(ErrorKind::InvalidInput, "a point needs four reals x1,y1,x2,y2");
  const Point q = Point::from_real(v[0], v[1], v[2], v[3]);
  if (!q.finite()) throw Error(ErrorKind::InvalidInput, "point coordinates must be finite");
  return q;
}

void apply_config(RunConfig& cfg, const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
  try {
    for (const auto& [key, val] : doc.items()) {
      if (key == "poly") cfg.poly = val.get<std::string>();
      else if (key == "out") cfg.out_dir = val.get<std::string>();
      else if (key == "seed") cfg.seed = val.get<std::uint64_t>();
      else if (key == "strict") cfg.strict = val.get<bool>();
      else if (key == "eps_d") cfg.eps_d = val.get<double>();
      else if (key == "tol_type") cfg.tol_type = val.get<double>();
      else if (key == "tol_ext") cfg.tol_ext = val.get<double>();
      else if (key == "abs_tol") cfg.abs_tol = val.get<double>();
      else if (key == "rel_tol") cfg.rel_tol = val.get<double>();
      else if (key == "m_max") cfg.m_max = val.get<int>();
      else if (key == "ma_threshold") cfg.ma_threshold = val.get<double>();
      else if (key == "grid") cfg.grid = val.get<int>();
      else if (key == "samples") cfg.samples = val.get<int>();
      else if (key == "degree") cfg.degree = val.get<int>();
      else if (key == "trials") cfg.trials = val.get<int>();
      else if (key == "point") cfg.point = val.get<std::string>();
      else if (key == "t_max") cfg.t_max = val.get<double>();
      else if (key == "s_max") cfg.s_max = val.get<double>();
      else if (key == "h") cfg.h = val.get<double>();
      else if (key == "r1") cfg.r1 = val.get<double>();
      else if (key == "r2") cfg.r2 = val.get<double>();
      else throw Error(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"mafoliate: Monge-Ampere foliation checks for polynomial exhaustions on C^2"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path;
  // Each flag remembers how to copy itself over the config-file values.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto common = [&](CLI::App* sub) {
    auto add = [&, sub](const std::string& name, auto RunConfig::*field, const std::string& help) {
      CLI::Option* opt = sub->add_option(name, flags.*field, help);
      overrides.emplace_back(opt, [field, &flags](RunConfig& c) { c.*field = flags.*field; });
      return opt;
    };
    add("--poly", &RunConfig::poly, "polynomial JSON file or corpus name");
    add("--out", &RunConfig::out_dir, "output directory");
    add("--seed", &RunConfig::seed, "random seed");
    add("--eps-d", &RunConfig::eps_d, "Levi-degeneracy threshold on D");
    add("--tol-type", &RunConfig::tol_type, "pairing tolerance for type");
    add("--tol-ext", &RunConfig::tol_ext, "ray-limit agreement tolerance");
    add("--abs-tol", &RunConfig::abs_tol, "integrator absolute tolerance");
    add("--rel-tol", &RunConfig::rel_tol, "integrator relative tolerance");
    add("--m-max", &RunConfig::m_max, "bracket length cap");
    add("--ma-threshold", &RunConfig::ma_threshold, "normalized residual counted as MA");
    add("--samples", &RunConfig::samples, "sample count");
    add("--point", &RunConfig::point, "point x1,y1,x2,y2");
    CLI::Option* strict = sub->add_flag("--strict", flags.strict, "exit 1 when a verdict is violated");
    overrides.emplace_back(strict, [&flags](RunConfig& c) { c.strict = flags.strict; });
    sub->add_option("--config", config_path, "JSON config; flags take precedence");
    return add;
  };

  using Handler = std::function<Outcome(const HermitianPolynomial&, const RunConfig&)>;
  std::vector<std::tuple<CLI::App*, std::string, Handler, std::string>> commands;
  auto reg = [&](const std::string& name, const std::string& help, Handler h, const std::string& csv_name) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, name, std::move(h), csv_name);
    return sub;
  };

  {
    CLI::App* s = reg("check-ma", "MA residuals on a sphere-slice grid (CSV)", check_ma, "check-ma.csv");
    common(s)("--grid", &RunConfig::grid, "grid points per angle");
  }
  common(reg("gradient", "complex gradient Z at a point, extended across D = 0", gradient, ""));
  common(reg("type-at", "finite type at a point", type_at, ""));
  {
    CLI::App* s = reg("trace-leaf", "trace the leaf through --point (CSV) with diagnostics", trace, "leaf.csv");
    auto add = common(s);
    add("--t-max", &RunConfig::t_max, "t range [0, t-max]");
    add("--s-max", &RunConfig::s_max, "s range [0, s-max]");
    add("--step", &RunConfig::h, "grid step h");
  }
  common(reg("burns", "bidegree verdict for a homogeneous exhaustion", burns, ""));
  {
    CLI::App* s = reg("weights", "holomorphic fit of Z, zero set and weights", weights, "");
    auto add = common(s);
    add("--degree", &RunConfig::degree, "fit degree");
    add("--trials", &RunConfig::trials, "homogeneity trials");
  }
  {
    CLI::App* s = reg("transport", "flow {rho = r1} onto {rho = r2}", transport, "");
    auto add = common(s);
    add("--r1", &RunConfig::r1, "source level");
    add("--r2", &RunConfig::r2, "target level");
  }
  {
    CLI::App* s = reg("report", "full pipeline as one JSON document", report, "");
    auto add = common(s);
    add("--grid", &RunConfig::grid, "check-ma grid points per angle");
    add("--degree", &RunConfig::degree, "fit degree");
    add("--trials", &RunConfig::trials, "homogeneity trials");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitInputError;
  }

  for (auto& [sub, name, handler, csv_name] : commands) {
    if (!sub->parsed()) continue;
    try {
      RunConfig cfg;
      if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) throw Error(ErrorKind::InvalidInput, "cannot read config " + config_path);
        nlohmann::json doc;
        try {
          doc = nlohmann::json::parse(f);
        } catch (const nlohmann::json::exception& e) {
          throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
        }
        apply_config(cfg, doc);
      }
      for (auto& [opt, copy] : overrides) {
        if (opt->count() > 0) copy(cfg);
      }
      validate(cfg);
      const HermitianPolynomial p = load_poly(cfg);
      const Outcome o = handler(p, cfg);

      nlohmann::json doc = {{"toolkit_version", std::string(kToolkitVersion)},
                            {"polynomial_hash", polynomial_hash(p)},
                            {"command", name},
                            {"seed", cfg.seed},
                            {"violated", o.violated},
                            {"result", o.result}};
      const std::string text = doc.dump(2) + "\n";
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        const std::filesystem::path dir(cfg.out_dir);
        write_file(dir / (name + ".json"), text);
        if (!csv_name.empty()) write_file(dir / csv_name, o.csv);
        // Wall-clock data stays out of the analysis JSON.
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        const nlohmann::json meta = {
            {"command", name},
            {"unix_time_ms", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
        write_file(dir / (name + ".meta.json"), meta.dump(2) + "\n");
        out << text;
      } else if (!csv_name.empty()) {
        out << o.csv;
        err << text;
      } else {
        out << text;
      }
      return (o.violated && cfg.strict) ? kExitViolated : kExitOk;
    } catch (const Error& e) {
      err << e.what() << '\n';
      return kExitInputError;
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return kExitInputError;
    }
  }
  return kExitInputError;
}

} // namespace mafoliate::cli
