#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mafoliate/errors.hpp"
#include "mafoliate/foliation.hpp"
#include "mafoliate/parallel.hpp"

namespace mafoliate {

namespace {

std::string format_g(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

} // namespace

WeightEstimate estimate_weights(const HolomorphicFit& fit, double tol) {
  const double at_center = norm2(fit.evaluate(Point{}));
  if (at_center > tol) {
    throw Error(ErrorKind::NonVanishingAtCenter, "|Z(0)| = " + format_g(at_center));
  }
  WeightEstimate w;
  w.jacobian = fit.jacobian(Point{});
  const Eigen::Matrix2cd& J = w.jacobian;
  const cd half_tr = 0.5 * (J(0, 0) + J(1, 1));
  const Eigen::Matrix2cd traceless = J - half_tr * Eigen::Matrix2cd::Identity();
  // Near a scalar matrix the discriminant formula loses half the digits
  // (sqrt of a rounding error); the eigenvalues are within |J - cI| of c.
  const bool near_scalar = traceless.norm() <= tol * (1.0 + std::abs(half_tr));
  const cd disc = near_scalar ? cd{0.0} : std::sqrt(half_tr * half_tr - J.determinant());
  std::array<cd, 2> ev{half_tr - disc, half_tr + disc};
  w.max_imag = std::max(std::abs(ev[0].imag()), std::abs(ev[1].imag()));
  if (w.max_imag > tol) {
    throw Error(ErrorKind::ComplexEigenvalues, "linear part has eigenvalue imaginary part " + format_g(w.max_imag));
  }
  if (ev[1].real() < ev[0].real()) std::swap(ev[0], ev[1]);
  w.c1 = ev[0].real();
  w.c2 = ev[1].real();

  // Distinct eigenvalues diagonalize; a repeated one does so only if J is
  // scalar, so the nilpotent part is the obstruction. Terms beyond the
  // linear part count against the linear model as well.
  double obstruction = 0.0;
  if (std::abs(ev[1] - ev[0]) <= std::sqrt(tol) * (1.0 + std::abs(half_tr))) {
    obstruction = traceless.norm();
  }
  w.residual = obstruction + fit.nonlinear_mass();
  return w;
}

double weighted_homogeneity_check(const HermitianPolynomial& p, double c1, double c2, int trials,
                                  std::uint64_t seed) {
  if (!(c1 > 0.0) || !(c2 > 0.0)) throw Error(ErrorKind::InvalidInput, "weights must be positive");
  if (trials <= 0) throw Error(ErrorKind::InvalidInput, "trial count must be positive");
  const std::size_t n = static_cast<std::size_t>(trials);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> re_part(-1.0, 1.0);
  std::uniform_real_distribution<double> im_part(-M_PI, M_PI);
  std::vector<Point> zs(n);
  std::vector<cd> lambdas(n);
  for (std::size_t i = 0; i < n; ++i) {
    zs[i] = Point::from_real(normal(rng), normal(rng), normal(rng), normal(rng));
    lambdas[i] = cd{re_part(rng), im_part(rng)};
  }

  std::vector<double> defect(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const cd lam = lambdas[i];
    const Point moved{std::exp(c1 * lam) * zs[i].z1, std::exp(c2 * lam) * zs[i].z2};
    const double expected = std::exp(2.0 * lam.real()) * p.evaluate(zs[i]);
    defect[i] = std::abs(p.evaluate(moved) - expected) / std::abs(expected);
  });
  return *std::max_element(defect.begin(), defect.end());
}

nlohmann::json to_json(const WeightEstimate& w) {
  nlohmann::json jac = nlohmann::json::array();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) jac.push_back({w.jacobian(r, c).real(), w.jacobian(r, c).imag()});
  }
  return {{"c1", w.c1}, {"c2", w.c2}, {"jacobian", jac}, {"residual", w.residual}, {"max_imag", w.max_imag}};
}

nlohmann::json to_json(const TransportReport& r) {
  return {{"r1", r.r1},
          {"r2", r.r2},
          {"samples", r.rates.size()},
          {"rates", r.rates},
          {"times", r.times},
          {"max_landing_defect", r.max_landing_defect},
          {"max_round_trip", r.max_round_trip}};
}

} // namespace mafoliate
