#pragma once

#include <array>

#include "mafoliate/point.hpp"
#include "mafoliate/polynomial.hpp"

namespace mafoliate {

/// Frame index order used by every 4-component array: d1, d2, dbar1, dbar2.
using Vec4c = std::array<cd, 4>;

/// Vector field with exact polynomial coefficients in the frame
/// (d/dz1, d/dz2, d/dzbar1, d/dzbar2).
struct PolyVectorField {
  std::array<Polynomial, 4> c;

  bool is_type_10() const { return c[2].is_zero() && c[3].is_zero(); }
  bool is_zero() const;

  /// Complex conjugate field; swaps the (1,0) and (0,1) blocks.
  PolyVectorField conjugate() const;
  /// Keeps the (1,0) components. The complex structure acts by +i on them
  /// and -i on the (0,1) block, so this is (Y - iJY)/2.
  PolyVectorField type_10_part() const;

  /// Derivation applied to a function.
  Polynomial apply(const Polynomial& f) const;
  Vec4c evaluate(const Point& q) const;

  friend PolyVectorField operator+(const PolyVectorField& x, const PolyVectorField& y);
  friend PolyVectorField operator-(const PolyVectorField& x, const PolyVectorField& y);
  friend PolyVectorField operator*(const Polynomial& f, const PolyVectorField& x);
  friend bool operator==(const PolyVectorField& x, const PolyVectorField& y) { return x.c == y.c; }
};

/// Exact commutator [V, W]: component k is V(W^k) - W(V^k).
PolyVectorField lie_bracket(const PolyVectorField& v, const PolyVectorField& w);

/// Value and first partials of a field at a point; partial[k][j] is the
/// derivative of component k along frame variable j.
struct FieldJet {
  Vec4c value{};
  std::array<Vec4c, 4> partial{};
};

FieldJet field_jet(const PolyVectorField& v, const Point& q);

/// Pointwise commutator from first-order jets.
Vec4c bracket_at(const FieldJet& v, const FieldJet& w);

inline double norm4(const Vec4c& v) {
  double s = 0.0;
  for (const cd& x : v) s += std::norm(x);
  return std::sqrt(s);
}

} // namespace mafoliate
