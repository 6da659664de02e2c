#include <algorithm>
#include <cmath>
#include <sstream>

#include "mafoliate/errors.hpp"
#include "mafoliate/foliation.hpp"
#include "mafoliate/parallel.hpp"

namespace mafoliate {

std::size_t LeafGrid::nt() const { return static_cast<std::size_t>(std::llround((t_max - t_min) / h)) + 1; }
std::size_t LeafGrid::ns() const { return static_cast<std::size_t>(std::llround((s_max - s_min) / h)) + 1; }

namespace {

/// Flow to signed times: non-negative ones forward along `direction`, the
/// rest backward.
std::vector<Point> flow_signed(const GradientField& field, const Point& start, cd direction,
                               const std::vector<double>& times) {
  std::vector<double> fwd, bwd;
  for (double t : times) (t >= 0.0 ? fwd : bwd).push_back(std::abs(t));
  std::sort(fwd.begin(), fwd.end());
  std::sort(bwd.begin(), bwd.end());
  const std::vector<Point> pf = flow_to_times(field, start, direction, fwd);
  const std::vector<Point> pb = flow_to_times(field, start, -direction, bwd);
  std::vector<Point> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t >= 0.0) out.push_back(pf[std::lower_bound(fwd.begin(), fwd.end(), t) - fwd.begin()]);
    else out.push_back(pb[std::lower_bound(bwd.begin(), bwd.end(), -t) - bwd.begin()]);
  }
  return out;
}

} // namespace

LeafTrace trace_leaf(const HermitianPolynomial& p, const Point& seed, const LeafGrid& grid, const FlowConfig& cfg) {
  if (!(grid.h > 0.0) || grid.t_max < grid.t_min || grid.s_max < grid.s_min) {
    throw Error(ErrorKind::InvalidInput, "malformed leaf grid");
  }
  const GradientField field(p, cfg);
  const double rho_seed = field.exhaustion().value(seed);
  if (!(rho_seed > 0.0)) throw Error(ErrorKind::NonPositiveRho, "leaf seed must have rho > 0");

  LeafTrace tr;
  tr.seed = seed;
  tr.grid = grid;
  const std::size_t nt = grid.nt();
  const std::size_t ns = grid.ns();
  tr.points.assign(nt * ns, Point{});
  tr.z_values.assign(nt * ns, Vec2c{});
  tr.rho_values.assign(nt * ns, 0.0);
  tr.u_values.assign(nt * ns, 0.0);
  tr.reached.assign(nt * ns, false);

  std::vector<double> s_times(ns), t_times(nt);
  for (std::size_t j = 0; j < ns; ++j) s_times[j] = grid.s(j);
  for (std::size_t i = 0; i < nt; ++i) t_times[i] = grid.t(i);

  const cd i_unit{0.0, 1.0};
  std::vector<Point> row_starts;
  try {
    row_starts = flow_signed(field, seed, i_unit, s_times);
  } catch (const Error& e) {
    if (!cfg.allow_partial) throw;
    tr.failure = e.what();
    return tr;
  }
  for (const Point& q : row_starts) {
    tr.level_defect = std::max(tr.level_defect, std::abs(field.exhaustion().value(q) - rho_seed) / rho_seed);
  }

  std::vector<std::string> row_failure(ns);
  parallel_for(ns, [&](std::size_t j) {
    std::vector<Point> row;
    try {
      row = flow_signed(field, row_starts[j], 1.0, t_times);
    } catch (const Error& e) {
      if (!cfg.allow_partial) throw;
      row_failure[j] = e.what();
      return;
    }
    for (std::size_t i = 0; i < nt; ++i) {
      const std::size_t k = tr.index(i, j);
      tr.points[k] = row[i];
      tr.z_values[k] = field(row[i]);
      tr.rho_values[k] = field.exhaustion().value(row[i]);
      tr.u_values[k] = std::log(tr.rho_values[k]);
      tr.reached[k] = true;
    }
  });
  tr.complete = std::all_of(tr.reached.begin(), tr.reached.end(), [](bool b) { return b; });
  for (const std::string& f : row_failure) {
    if (!f.empty()) {
      tr.failure = f;
      break;
    }
  }

  // Growth fit u = u0(s) + c t over all reached nodes, then per-interval rates.
  if (nt >= 2) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      double tbar = 0.0, ubar = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i < nt; ++i) {
        if (!tr.reached[tr.index(i, j)]) continue;
        tbar += t_times[i];
        ubar += tr.u_values[tr.index(i, j)];
        ++cnt;
      }
      if (cnt < 2) continue;
      tbar /= static_cast<double>(cnt);
      ubar /= static_cast<double>(cnt);
      for (std::size_t i = 0; i < nt; ++i) {
        if (!tr.reached[tr.index(i, j)]) continue;
        num += (t_times[i] - tbar) * (tr.u_values[tr.index(i, j)] - ubar);
        den += (t_times[i] - tbar) * (t_times[i] - tbar);
      }
    }
    tr.growth_rate = den > 0.0 ? num / den : 0.0;
    for (std::size_t j = 0; j < ns; ++j) {
      for (std::size_t i = 0; i + 1 < nt; ++i) {
        const std::size_t a = tr.index(i, j), b = tr.index(i + 1, j);
        if (!tr.reached[a] || !tr.reached[b]) continue;
        const double rate = (tr.u_values[b] - tr.u_values[a]) / grid.h;
        tr.rate_spread = std::max(tr.rate_spread, std::abs(rate - tr.growth_rate) / std::abs(tr.growth_rate));
      }
    }
  }
  return tr;
}

LeafDiagnostics leaf_diagnostics(const LeafTrace& tr) {
  if (!tr.complete) throw Error(ErrorKind::IncompleteTrace, "trace has unreached nodes: " + tr.failure);
  const std::size_t nt = tr.grid.nt();
  const std::size_t ns = tr.grid.ns();
  const double h = tr.grid.h;
  const cd i_unit{0.0, 1.0};

  LeafDiagnostics d;
  d.growth_rate = tr.growth_rate;
  d.rate_spread = tr.rate_spread;
  d.level_defect = tr.level_defect;

  auto harmonic_values = [&](std::size_t k) {
    const Point& f = tr.points[k];
    return std::array<double, 5>{tr.u_values[k], f.z1.real(), f.z1.imag(), f.z2.real(), f.z2.imag()};
  };
  for (std::size_t j = 1; j + 1 < ns; ++j) {
    for (std::size_t i = 1; i + 1 < nt; ++i) {
      const auto c = harmonic_values(tr.index(i, j));
      const auto e = harmonic_values(tr.index(i + 1, j));
      const auto w = harmonic_values(tr.index(i - 1, j));
      const auto n = harmonic_values(tr.index(i, j + 1));
      const auto s = harmonic_values(tr.index(i, j - 1));
      for (std::size_t f = 0; f < 5; ++f) {
        const double lap = std::abs(e[f] + w[f] + n[f] + s[f] - 4.0 * c[f]) / (h * h);
        if (f == 0) d.harmonicity_defect_u = std::max(d.harmonicity_defect_u, lap);
        d.harmonicity_defect = std::max(d.harmonicity_defect, lap);
      }
    }
  }

  d.monotone_growth = nt >= 2;
  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      if (!(tr.u_values[tr.index(i + 1, j)] > tr.u_values[tr.index(i, j)])) d.monotone_growth = false;
    }
  }
  d.monotone_growth = d.monotone_growth && tr.growth_rate > 0.0;

  for (std::size_t j = 0; j < ns; ++j) {
    for (std::size_t i = 0; i < nt; ++i) {
      const std::size_t k = tr.index(i, j);
      const Vec2c& z = tr.z_values[k];
      if (i > 0 && i + 1 < nt) {
        const Point df = tr.points[tr.index(i + 1, j)] - tr.points[tr.index(i - 1, j)];
        const Vec2c ft{df.z1 / (2.0 * h) - z[0], df.z2 / (2.0 * h) - z[1]};
        d.parametrization_defect = std::max(d.parametrization_defect, norm2(ft));
      }
      if (j > 0 && j + 1 < ns) {
        const Point df = tr.points[tr.index(i, j + 1)] - tr.points[tr.index(i, j - 1)];
        const Vec2c fs{df.z1 / (2.0 * h) - i_unit * z[0], df.z2 / (2.0 * h) - i_unit * z[1]};
        d.parametrization_defect = std::max(d.parametrization_defect, norm2(fs));
      }
      const Point& f = tr.points[k];
      const double wedge = std::abs(f.z1 * tr.seed.z2 - f.z2 * tr.seed.z1);
      d.radiality_defect = std::max(d.radiality_defect, wedge / (f.norm() * tr.seed.norm()));
    }
  }
  return d;
}

std::string leaf_trace_csv(const LeafTrace& tr) {
  std::ostringstream out;
  out.precision(17);
  out << "t,s,x1,y1,x2,y2,rho,u\n";
  for (std::size_t j = 0; j < tr.grid.ns(); ++j) {
    for (std::size_t i = 0; i < tr.grid.nt(); ++i) {
      const std::size_t k = tr.index(i, j);
      if (!tr.reached[k]) continue;
      const auto x = tr.points[k].real_coords();
      out << tr.grid.t(i) << ',' << tr.grid.s(j) << ',' << x[0] << ',' << x[1] << ',' << x[2] << ',' << x[3] << ','
          << tr.rho_values[k] << ',' << tr.u_values[k] << '\n';
    }
  }
  return out.str();
}

nlohmann::json to_json(const LeafDiagnostics& d) {
  return {{"harmonicity_defect_u", d.harmonicity_defect_u},
          {"harmonicity_defect", d.harmonicity_defect},
          {"monotone_growth", d.monotone_growth},
          {"growth_rate", d.growth_rate},
          {"rate_spread", d.rate_spread},
          {"parametrization_defect", d.parametrization_defect},
          {"radiality_defect", d.radiality_defect},
          {"level_defect", d.level_defect}};
}

} // namespace mafoliate
