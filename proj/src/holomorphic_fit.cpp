#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "mafoliate/errors.hpp"
#include "mafoliate/foliation.hpp"

namespace mafoliate {

namespace {

cd ipow(cd z, int n) {
  cd r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

nlohmann::json point_json(const Point& q) { return {q.z1.real(), q.z1.imag(), q.z2.real(), q.z2.imag()}; }
nlohmann::json complex_json(cd z) { return nlohmann::json::array({z.real(), z.imag()}); }

/// Pattern search for the minimum of |Z| on the sphere of radius r, started
/// from `best`. Steps are taken in the four real coordinates and projected
/// back onto the sphere.
double refine_sphere_min(const HolomorphicFit& fit, double r, Point& best) {
  auto value = [&](const Point& q) { return norm2(fit.evaluate(q)); };
  double fbest = value(best);
  for (double step = 0.1 * r; step > 1e-12 * r; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int k = 0; k < 8; ++k) {
        auto x = best.real_coords();
        x[k / 2] += (k % 2 == 0 ? step : -step);
        Point q = Point::from_real(x[0], x[1], x[2], x[3]);
        q = (r / q.norm()) * q;
        const double fq = value(q);
        if (fq < fbest) {
          fbest = fq;
          best = q;
          improved = true;
        }
      }
    }
  }
  return fbest;
}

} // namespace

std::vector<std::array<int, 2>> holomorphic_monomials(int degree) {
  if (degree < 0) throw Error(ErrorKind::InvalidInput, "fit degree must be non-negative");
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= degree; ++d) {
    for (int a1 = d; a1 >= 0; --a1) out.push_back({a1, d - a1});
  }
  return out;
}

Vec2c HolomorphicFit::evaluate(const Point& q) const {
  Vec2c v{0.0, 0.0};
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const cd m = ipow(q.z1, exponents[k][0]) * ipow(q.z2, exponents[k][1]);
    v[0] += coeff1[k] * m;
    v[1] += coeff2[k] * m;
  }
  return v;
}

Eigen::Matrix2cd HolomorphicFit::jacobian(const Point& q) const {
  Eigen::Matrix2cd J = Eigen::Matrix2cd::Zero();
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    const auto [a1, a2] = exponents[k];
    const cd d1 = a1 > 0 ? static_cast<double>(a1) * ipow(q.z1, a1 - 1) * ipow(q.z2, a2) : cd{0.0};
    const cd d2 = a2 > 0 ? static_cast<double>(a2) * ipow(q.z1, a1) * ipow(q.z2, a2 - 1) : cd{0.0};
    J(0, 0) += coeff1[k] * d1;
    J(0, 1) += coeff1[k] * d2;
    J(1, 0) += coeff2[k] * d1;
    J(1, 1) += coeff2[k] * d2;
  }
  return J;
}

double HolomorphicFit::nonlinear_mass() const {
  double mass = 0.0;
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k][0] + exponents[k][1] == 1) continue;
    mass += std::abs(coeff1[k]) + std::abs(coeff2[k]);
  }
  return mass;
}

std::optional<cd> HolomorphicFit::coefficient(int component, int a1, int a2) const {
  for (std::size_t k = 0; k < exponents.size(); ++k) {
    if (exponents[k][0] == a1 && exponents[k][1] == a2) return component == 0 ? coeff1[k] : coeff2[k];
  }
  return std::nullopt;
}

HolomorphicFit HolomorphicFit::linear(const Eigen::Matrix2cd& J, Vec2c c0) {
  HolomorphicFit f;
  f.degree = 1;
  f.exponents = holomorphic_monomials(1);  // 1, z1, z2
  f.coeff1 = {c0[0], J(0, 0), J(0, 1)};
  f.coeff2 = {c0[1], J(1, 0), J(1, 1)};
  return f;
}

HolomorphicFit fit_holomorphic_Z(const HermitianPolynomial& p, const std::vector<Point>& samples, int degree,
                                 double eps_D) {
  HolomorphicFit fit;
  fit.degree = degree;
  fit.exponents = holomorphic_monomials(degree);
  const std::size_t nb = fit.exponents.size();

  // Every fourth sample is held out for the drho(Z) = rho check.
  std::vector<Point> train, held;
  for (std::size_t i = 0; i < samples.size(); ++i) (i % 4 == 3 ? held : train).push_back(samples[i]);
  if (train.size() < 3 * nb) {
    throw Error(ErrorKind::RankDeficientSamples, "need at least " + std::to_string(3 * nb) + " fit samples, got " +
                                                      std::to_string(train.size()));
  }

  const Exhaustion ex(p);
  const Eigen::Index n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXcd A(n, static_cast<Eigen::Index>(nb));
  Eigen::MatrixXcd rhs(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Point& q = train[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < nb; ++k) {
      A(i, static_cast<Eigen::Index>(k)) = ipow(q.z1, fit.exponents[k][0]) * ipow(q.z2, fit.exponents[k][1]);
    }
    const GradientValue g = complex_gradient(ex.jet(q), eps_D);
    rhs(i, 0) = g.Z1;
    rhs(i, 1) = g.Z2;
  }
  // Column equilibration keeps high-degree monomials from dominating.
  Eigen::VectorXd scale(static_cast<Eigen::Index>(nb));
  for (Eigen::Index k = 0; k < A.cols(); ++k) {
    scale(k) = A.col(k).norm();
    if (scale(k) == 0.0) throw Error(ErrorKind::RankDeficientSamples, "a monomial vanishes on every sample");
    A.col(k) /= scale(k);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < A.cols()) {
    throw Error(ErrorKind::RankDeficientSamples, "sample design has rank " + std::to_string(qr.rank()) + " < " +
                                                      std::to_string(A.cols()));
  }
  const Eigen::MatrixXcd coef = qr.solve(rhs);
  fit.coeff1.resize(nb);
  fit.coeff2.resize(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    const Eigen::Index kk = static_cast<Eigen::Index>(k);
    fit.coeff1[k] = coef(kk, 0) / scale(kk);
    fit.coeff2[k] = coef(kk, 1) / scale(kk);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec2c z = fit.evaluate(train[static_cast<std::size_t>(i)]);
    fit.max_sample_residual =
        std::max(fit.max_sample_residual, norm2({z[0] - rhs(i, 0), z[1] - rhs(i, 1)}));
  }
  for (const Point& q : held) {
    const WirtingerJet jet = ex.jet(q);
    fit.max_heldout_residual =
        std::max(fit.max_heldout_residual, std::abs(jet.drho(fit.evaluate(q)) - jet.rho) / jet.rho);
  }
  fit.fit_samples = train.size();
  fit.heldout_samples = held.size();
  return fit;
}

ZeroSetReport zero_set_check(const HolomorphicFit& fit, double search_radius) {
  if (!(search_radius > 0.0)) throw Error(ErrorKind::InvalidInput, "search radius must be positive");
  constexpr std::size_t kSphereSamples = 2000;
  constexpr std::size_t kNewtonStarts = 64;

  ZeroSetReport rep;
  rep.origin_value = norm2(fit.evaluate(Point{}));
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const double r = search_radius * std::ldexp(1.0, -k);
    const std::vector<Point> pts = sphere_samples(kSphereSamples, r, 97 + static_cast<std::uint64_t>(k));
    Point best = pts.front();
    double fbest = norm2(fit.evaluate(best));
    for (const Point& q : pts) {
      const double v = norm2(fit.evaluate(q));
      if (v < fbest) {
        fbest = v;
        best = q;
      }
    }
    fbest = refine_sphere_min(fit, r, best);
    rep.radii.push_back(r);
    rep.min_norm.push_back(fbest);
    rep.min_ratio = std::min(rep.min_ratio, fbest / r);
  }

  // Damped least-squares Newton from starts spread through the ball. A
  // singular Jacobian (non-isolated zeros) still converges onto the zero set.
  std::vector<Point> starts;
  for (int shell = 1; shell <= 4; ++shell) {
    for (const Point& q : sphere_samples(kNewtonStarts / 4, search_radius * shell / 4.0, 211 + shell)) {
      starts.push_back(q);
    }
  }
  const double zero_tol = 1e-10 * (1.0 + search_radius);
  for (Point q : starts) {
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const Vec2c f = fit.evaluate(q);
      if (norm2(f) < zero_tol) {
        converged = true;
        break;
      }
      const Eigen::Matrix2cd J = fit.jacobian(q);
      const Eigen::Vector2cd rhs(f[0], f[1]);
      const Eigen::Vector2cd step = J.completeOrthogonalDecomposition().solve(rhs);
      if (!step.allFinite()) break;
      q = Point{q.z1 - step(0), q.z2 - step(1)};
      if (!q.finite() || q.norm() > 4.0 * search_radius) break;
    }
    if (!converged || q.norm() > search_radius) continue;
    const bool known = std::any_of(rep.zeros.begin(), rep.zeros.end(), [&](const Point& z) {
      return (z - q).norm() < 1e-6 * search_radius;
    });
    if (!known) rep.zeros.push_back(q);
  }
  std::sort(rep.zeros.begin(), rep.zeros.end(), [](const Point& a, const Point& b) { return a.norm() < b.norm(); });

  const bool only_origin = std::all_of(rep.zeros.begin(), rep.zeros.end(),
                                       [&](const Point& z) { return z.norm() < 1e-6 * search_radius; });
  rep.isolated_at_origin = rep.origin_value < zero_tol && only_origin && rep.min_ratio > 1e-6;
  return rep;
}

nlohmann::json to_json(const HolomorphicFit& f) {
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t k = 0; k < f.exponents.size(); ++k) {
    terms.push_back({{"a", {f.exponents[k][0], f.exponents[k][1]}},
                     {"Z1", complex_json(f.coeff1[k])},
                     {"Z2", complex_json(f.coeff2[k])}});
  }
  return {{"degree", f.degree},
          {"terms", terms},
          {"nonlinear_mass", f.nonlinear_mass()},
          {"max_sample_residual", f.max_sample_residual},
          {"max_heldout_residual", f.max_heldout_residual},
          {"fit_samples", f.fit_samples},
          {"heldout_samples", f.heldout_samples}};
}

nlohmann::json to_json(const ZeroSetReport& r) {
  nlohmann::json zeros = nlohmann::json::array();
  for (const Point& z : r.zeros) zeros.push_back(point_json(z));
  return {{"radii", r.radii},           {"min_norm", r.min_norm}, {"min_ratio", r.min_ratio},
          {"origin_value", r.origin_value}, {"zeros", zeros},      {"isolated_at_origin", r.isolated_at_origin}};
}

} // namespace mafoliate
