#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "mafoliate/point.hpp"
#include "mafoliate/polynomial.hpp"

namespace mafoliate {

/// Second-order Wirtinger jet of rho at a point.
///
/// levi(mu, nu) holds rho_{mu nubar} = d^2 rho / dz^mu dzbar^nu. D is its
/// determinant and B the bordered scalar
///   B = rho_{11bar}|rho_2|^2 + rho_{22bar}|rho_1|^2
///       - rho_{12bar} rho_{1bar} rho_2 - rho_{21bar} rho_1 rho_{2bar},
/// which equals D * drho(Z) wherever Z is defined.
struct WirtingerJet {
  Point point;
  double rho = 0.0;
  cd d1, d2;
  Eigen::Matrix2cd levi = Eigen::Matrix2cd::Zero();
  double D = 0.0;
  double B = 0.0;

  Vec2c gradient() const { return {d1, d2}; }
  /// Pairing of the (1,0) part of a vector with drho.
  cd drho(const Vec2c& v) const { return d1 * v[0] + d2 * v[1]; }
};

/// rho together with its symbolic first and mixed second derivatives; the
/// derivative polynomials are built once and shared by every jet evaluation.
class Exhaustion {
public:
  explicit Exhaustion(HermitianPolynomial rho);

  const HermitianPolynomial& rho() const { return rho_; }
  const Polynomial& d(int mu) const { return d_[mu]; }
  const Polynomial& dbar(int mu) const { return dbar_[mu]; }
  /// rho_{mu nubar}
  const Polynomial& mixed(int mu, int nu) const { return mixed_[mu][nu]; }

  double value(const Point& q) const { return rho_.evaluate(q); }
  WirtingerJet jet(const Point& q) const;

private:
  HermitianPolynomial rho_;
  std::array<Polynomial, 2> d_;
  std::array<Polynomial, 2> dbar_;
  std::array<std::array<Polynomial, 2>, 2> mixed_;
};

WirtingerJet eval_jet(const HermitianPolynomial& p, const Point& q);

enum class PshTarget { Rho, LogRho };

struct PshReport {
  double min_eigenvalue = 0.0;
  Point argmin;
  std::size_t samples = 0;
};

/// Hermitian matrix u_{mu nubar} = rho_{mu nubar}/rho - rho_mu rho_nubar / rho^2.
Eigen::Matrix2cd log_levi(const WirtingerJet& jet);

/// Smaller eigenvalue of a 2x2 Hermitian matrix.
double min_eigenvalue(const Eigen::Matrix2cd& h);

PshReport psh_min_eigen(const HermitianPolynomial& p, const std::vector<Point>& region, PshTarget target);

} // namespace mafoliate
