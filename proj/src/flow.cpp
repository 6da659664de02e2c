#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <functional>
#include <random>

#include "mafoliate/errors.hpp"
#include "mafoliate/foliation.hpp"
#include "mafoliate/parallel.hpp"

namespace odeint = boost::numeric::odeint;

namespace mafoliate {

namespace {

using State = std::array<double, 4>;

State to_state(const Point& q) { return q.real_coords(); }
Point from_state(const State& x) { return Point::from_real(x[0], x[1], x[2], x[3]); }

} // namespace

GradientField::GradientField(const HermitianPolynomial& p, FlowConfig cfg) : ex_(p), cfg_(std::move(cfg)) {
  cfg_.extension.eps_D = cfg_.eps_D;
}

Vec2c GradientField::operator()(const Point& q, bool& extended) const {
  const WirtingerJet jet = ex_.jet(q);
  if (!extended && jet.D <= cfg_.eps_D) extended = true;
  else if (extended && jet.D > cfg_.hysteresis * cfg_.eps_D) extended = false;
  if (extended) return extend_gradient(ex_, q, cfg_.extension).gradient.vec();
  return complex_gradient(jet, cfg_.eps_D).vec();
}

Vec2c GradientField::operator()(const Point& q) const {
  bool extended = false;
  return (*this)(q, extended);
}

std::vector<Point> flow_to_times(const GradientField& field, const Point& start, cd direction,
                                 const std::vector<double>& times) {
  const FlowConfig& cfg = field.config();
  std::vector<Point> out;
  out.reserve(times.size());
  if (times.empty()) return out;

  bool extended = false;
  std::size_t evals = 0;
  auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
    if (++evals > cfg.max_steps) {
      throw Error(ErrorKind::NoConvergence, "flow exceeded the step budget");
    }
    const Point q = from_state(x);
    if (!q.finite() || !(field.exhaustion().value(q) > 0.0)) {
      throw Error(ErrorKind::FlowEscape, "flow left the domain rho > 0");
    }
    const Vec2c z = field(q, extended);
    const cd v1 = direction * z[0];
    const cd v2 = direction * z[1];
    dxdt = {v1.real(), v1.imag(), v2.real(), v2.imag()};
  };

  // integrate_times needs strictly increasing times starting at 0.
  std::vector<double> grid{0.0};
  for (double t : times) {
    if (t < 0.0) throw Error(ErrorKind::InvalidInput, "flow_to_times expects non-negative times");
    if (t > grid.back()) grid.push_back(t);
    else if (t < grid.back()) throw Error(ErrorKind::InvalidInput, "flow_to_times expects ascending times");
  }
  std::vector<Point> at_grid;
  at_grid.reserve(grid.size());
  State x = to_state(start);
  if (grid.size() == 1) {
    at_grid.push_back(start);
  } else {
    auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_times(stepper, std::ref(rhs), x, grid.begin(), grid.end(), cfg.initial_step,
                            [&](const State& s, double) { at_grid.push_back(from_state(s)); });
  }
  std::size_t g = 0;
  for (double t : times) {
    while (grid[g] < t) ++g;
    out.push_back(at_grid[g]);
  }
  return out;
}

std::vector<Point> sphere_samples(std::size_t count, double r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(count);
  while (out.size() < count) {
    const double x1 = n(rng), y1 = n(rng), x2 = n(rng), y2 = n(rng);
    const double norm = std::sqrt(x1 * x1 + y1 * y1 + x2 * x2 + y2 * y2);
    if (norm < 1e-12) continue;
    out.push_back(Point::from_real(r * x1 / norm, r * y1 / norm, r * x2 / norm, r * y2 / norm));
  }
  return out;
}

std::vector<Point> sample_level_set(const HermitianPolynomial& p, double r, std::size_t count, std::uint64_t seed) {
  std::vector<Point> out;
  for (const Point& w : sphere_samples(count, 1.0, seed)) {
    auto f = [&](double lambda) { return p.evaluate(lambda * w) - r; };
    double hi = 1.0;
    for (int i = 0; f(hi) < 0.0; ++i) {
      if (i > 200) throw Error(ErrorKind::InvalidInput, "level set not reached along a ray");
      hi *= 2.0;
    }
    double lo = hi;
    for (int i = 0; f(lo) > 0.0; ++i) {
      if (i > 200) throw Error(ErrorKind::InvalidInput, "level set not bracketed along a ray");
      lo *= 0.5;
    }
    for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (f(mid) < 0.0 ? lo : hi) = mid;
    }
    out.push_back((std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi) * w);
  }
  return out;
}

TransportReport level_transport(const HermitianPolynomial& p, double r1, double r2,
                                const std::vector<Point>& samples, const FlowConfig& cfg) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw Error(ErrorKind::InvalidInput, "levels must be positive");
  const GradientField field(p, cfg);
  constexpr double kProbe = 0.05;

  TransportReport rep;
  rep.r1 = r1;
  rep.r2 = r2;
  const std::size_t n = samples.size();
  std::vector<double> rates(n), times(n), landing(n), round_trip(n);
  parallel_for(n, [&](std::size_t i) {
    const Point& z = samples[i];
    const double rho0 = field.exhaustion().value(z);
    if (std::abs(rho0 - r1) > 1e-8 * r1) {
      throw Error(ErrorKind::InvalidInput, "transport sample is not on the level set rho = r1");
    }
    const Point probe = flow_to_times(field, z, 1.0, {kProbe}).front();
    const double c = std::log(field.exhaustion().value(probe) / rho0) / kProbe;
    const double T = std::log(r2 / r1) / c;
    const cd dir = T >= 0.0 ? 1.0 : -1.0;
    const Point landed = flow_to_times(field, z, dir, {std::abs(T)}).front();
    const Point back = flow_to_times(field, landed, -dir, {std::abs(T)}).front();
    rates[i] = c;
    times[i] = T;
    landing[i] = std::abs(field.exhaustion().value(landed) - r2) / r2;
    round_trip[i] = (back - z).norm() / std::max(1.0, z.norm());
  });
  rep.rates = rates;
  rep.times = times;
  for (std::size_t i = 0; i < n; ++i) {
    rep.max_landing_defect = std::max(rep.max_landing_defect, landing[i]);
    rep.max_round_trip = std::max(rep.max_round_trip, round_trip[i]);
  }
  return rep;
}

} // namespace mafoliate
