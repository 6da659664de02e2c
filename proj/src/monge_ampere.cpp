#include "mafoliate/monge_ampere.hpp"

#include <cmath>

#include "mafoliate/errors.hpp"

namespace mafoliate {

namespace {

nlohmann::json complex_json(cd z) { return nlohmann::json::array({z.real(), z.imag()}); }

void require_positive_rho(const WirtingerJet& jet) {
  if (!(jet.rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "rho must be positive");
}

void require_nondegenerate(const WirtingerJet& jet, double eps_D) {
  if (!(jet.D > eps_D)) {
    throw Error(ErrorKind::DegenerateLevi,
                "Levi determinant " + std::to_string(jet.D) + " <= eps_D; use extend_gradient");
  }
}

} // namespace

MAReport ma_residual(const WirtingerJet& jet) {
  require_positive_rho(jet);
  MAReport r;
  r.point = jet.point;
  r.rho = jet.rho;
  r.D = jet.D;
  r.B = jet.B;
  r.residual = jet.rho * jet.D - jet.B;
  r.normalized = r.residual / (std::abs(jet.rho * jet.D) + std::abs(jet.B) + 1e-300);
  return r;
}

Vec2c gradient_cofactors(const WirtingerJet& jet) {
  const cd g1bar = std::conj(jet.d1);
  const cd g2bar = std::conj(jet.d2);
  // Solve levi^T W = D (rho_1bar, rho_2bar).
  return {jet.levi(1, 1) * g1bar - jet.levi(1, 0) * g2bar, jet.levi(0, 0) * g2bar - jet.levi(0, 1) * g1bar};
}

GradientValue complex_gradient(const WirtingerJet& jet, double eps_D) {
  require_nondegenerate(jet, eps_D);
  const Vec2c w = gradient_cofactors(jet);
  GradientValue g;
  g.Z1 = w[0] / jet.D;
  g.Z2 = w[1] / jet.D;
  g.pairing_check = jet.drho(g.vec()) - jet.rho;
  return g;
}

cd ddc_rho(const WirtingerJet& jet, const Vec2c& v, const Vec2c& w) {
  cd sum{0.0, 0.0};
  for (int mu = 0; mu < 2; ++mu) {
    for (int nu = 0; nu < 2; ++nu) sum += jet.levi(mu, nu) * v[mu] * std::conj(w[nu]);
  }
  return sum;
}

cd ddc_u(const WirtingerJet& jet, const Vec2c& v, const Vec2c& w) {
  require_positive_rho(jet);
  return ddc_rho(jet, v, w) / jet.rho - jet.drho(v) * std::conj(jet.drho(w)) / (jet.rho * jet.rho);
}

cd omega_pairing(const WirtingerJet& jet, const Vec2c& v, const Vec2c& w, double eps_D) {
  require_positive_rho(jet);
  require_nondegenerate(jet, eps_D);
  return jet.rho * ddc_u(jet, v, w) / jet.D + jet.drho(v) * std::conj(jet.drho(w)) / jet.rho;
}

nlohmann::json to_json(const MAReport& r) {
  return {{"x1", r.point.z1.real()}, {"y1", r.point.z1.imag()}, {"x2", r.point.z2.real()},
          {"y2", r.point.z2.imag()}, {"rho", r.rho},                {"D", r.D},
          {"B", r.B},                {"residual", r.residual},      {"normalized", r.normalized}};
}

nlohmann::json to_json(const GradientValue& g) {
  return {{"Z1", complex_json(g.Z1)}, {"Z2", complex_json(g.Z2)}, {"pairing_check", complex_json(g.pairing_check)}};
}

} // namespace mafoliate
