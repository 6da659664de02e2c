#pragma once

#include <nlohmann/json.hpp>

#include "mafoliate/jet.hpp"

namespace mafoliate {

inline constexpr double kDefaultEpsD = 1e-10;

/// Pointwise residual of (dd^c log rho)^2 = 0, written as rho*D - B
/// (= rho^3 det(u_{mu nubar})).
struct MAReport {
  Point point;
  double rho = 0.0;
  double D = 0.0;
  double B = 0.0;
  double residual = 0.0;
  double normalized = 0.0;
};

MAReport ma_residual(const WirtingerJet& jet);

/// Complex gradient Z = rho^{mu nubar} rho_nubar d/dz^mu together with the
/// defect drho(Z) - rho.
struct GradientValue {
  cd Z1, Z2;
  cd pairing_check;

  Vec2c vec() const { return {Z1, Z2}; }
};

/// Numerators D*Z^mu from the 2x2 cofactor formula. They solve
/// sum_mu rho_{mu nubar} W^mu = D rho_nubar and are defined everywhere.
Vec2c gradient_cofactors(const WirtingerJet& jet);

GradientValue complex_gradient(const WirtingerJet& jet, double eps_D = kDefaultEpsD);

/// dd^c u (V, conj W) = sum u_{mu nubar} V^mu conj(W^nu).
cd ddc_u(const WirtingerJet& jet, const Vec2c& v, const Vec2c& w);
/// dd^c rho (V, conj W) = sum rho_{mu nubar} V^mu conj(W^nu).
cd ddc_rho(const WirtingerJet& jet, const Vec2c& v, const Vec2c& w);

/// Tangential (1,0) vector L = rho_2 d1 - rho_1 d2 at the jet's point.
inline Vec2c tangential_vector(const WirtingerJet& jet) { return {jet.d2, -jet.d1}; }

/// Omega(V, conj W) = rho ddc_u(V, conj W)/D + drho(V) conj(drho(W))/rho.
/// Only exposed pointwise: the form does not extend across D = 0.
cd omega_pairing(const WirtingerJet& jet, const Vec2c& v, const Vec2c& w, double eps_D = kDefaultEpsD);

nlohmann::json to_json(const MAReport& r);
nlohmann::json to_json(const GradientValue& g);

} // namespace mafoliate
