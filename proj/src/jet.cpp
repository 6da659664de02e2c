#include "mafoliate/jet.hpp"

#include <cmath>
#include <limits>

#include "mafoliate/errors.hpp"

namespace mafoliate {

Exhaustion::Exhaustion(HermitianPolynomial rho) : rho_(std::move(rho)) {
  const Var holo[2] = {Var::z1, Var::z2};
  const Var anti[2] = {Var::zbar1, Var::zbar2};
  for (int mu = 0; mu < 2; ++mu) {
    d_[mu] = rho_.poly().derive(holo[mu]);
    dbar_[mu] = rho_.poly().derive(anti[mu]);
  }
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) mixed_[mu][nu] = d_[mu].derive(anti[nu]);
  }
}

WirtingerJet Exhaustion::jet(const Point& q) const {
  WirtingerJet j;
  j.point = q;
  j.rho = rho_.evaluate(q);
  j.d1 = d_[0].evaluate(q);
  j.d2 = d_[1].evaluate(q);
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) j.levi(mu, nu) = mixed_[mu][nu].evaluate(q);
  }
  // The diagonal is real and the off-diagonal pair conjugate; enforce it
  // so D and B come out exactly real.
  const double h11 = j.levi(0, 0).real();
  const double h22 = j.levi(1, 1).real();
  const cd h12 = 0.5 * (j.levi(0, 1) + std::conj(j.levi(1, 0)));
  j.levi(0, 0) = h11;
  j.levi(1, 1) = h22;
  j.levi(0, 1) = h12;
  j.levi(1, 0) = std::conj(h12);
  j.D = h11 * h22 - std::norm(h12);
  j.B = h11 * std::norm(j.d2) + h22 * std::norm(j.d1) - 2.0 * (h12 * std::conj(j.d1) * j.d2).real();
  return j;
}

WirtingerJet eval_jet(const HermitianPolynomial& p, const Point& q) { return Exhaustion(p).jet(q); }

Eigen::Matrix2cd log_levi(const WirtingerJet& jet) {
  if (!(jet.rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "log rho requires rho > 0");
  Eigen::Matrix2cd u;
  const cd g[2] = {jet.d1, jet.d2};
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) {
      u(mu, nu) = jet.levi(mu, nu) / jet.rho - g[mu] * std::conj(g[nu]) / (jet.rho * jet.rho);
    }
  }
  return u;
}

double min_eigenvalue(const Eigen::Matrix2cd& h) {
  const double a = h(0, 0).real();
  const double d = h(1, 1).real();
  const double off = std::abs(0.5 * (h(0, 1) + std::conj(h(1, 0))));
  const double mean = 0.5 * (a + d);
  const double radius = std::hypot(0.5 * (a - d), off);
  return mean - radius;
}

PshReport psh_min_eigen(const HermitianPolynomial& p, const std::vector<Point>& region, PshTarget target) {
  const Exhaustion ex(p);
  PshReport report;
  report.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (const Point& q : region) {
    const WirtingerJet j = ex.jet(q);
    double lam = 0.0;
    if (target == PshTarget::LogRho) {
      if (!(j.rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "sample with rho <= 0 for log_rho target");
      lam = min_eigenvalue(log_levi(j));
    } else {
      lam = min_eigenvalue(j.levi);
    }
    if (lam < report.min_eigenvalue) {
      report.min_eigenvalue = lam;
      report.argmin = q;
    }
    ++report.samples;
  }
  return report;
}

} // namespace mafoliate
