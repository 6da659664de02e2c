#pragma once

// Exact polynomials in (z1, z2, zbar1, zbar2) with complex-rational
// coefficients. Symbolic stages (derivatives, bracket towers) run in exact
// arithmetic; evaluation uses a double copy of the coefficients built once at
// construction.

#include <gmpxx.h>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mafoliate/point.hpp"

namespace mafoliate {

/// Exponents of z1^a1 z2^a2 zbar1^b1 zbar2^b2.
struct MonomialKey {
  std::array<int, 2> a{};
  std::array<int, 2> b{};

  int holomorphic_degree() const { return a[0] + a[1]; }
  int antiholomorphic_degree() const { return b[0] + b[1]; }
  int total_degree() const { return holomorphic_degree() + antiholomorphic_degree(); }
  std::pair<int, int> bidegree() const { return {holomorphic_degree(), antiholomorphic_degree()}; }
  MonomialKey conjugate() const { return {b, a}; }

  friend bool operator==(const MonomialKey&, const MonomialKey&) = default;
};

/// Graded lexicographic order: total degree first, then (a1, a2, b1, b2)
/// lexicographically descending.
struct GradedLex {
  bool operator()(const MonomialKey& x, const MonomialKey& y) const;
};

struct ComplexRational {
  mpq_class re{0};
  mpq_class im{0};

  ComplexRational() = default;
  ComplexRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {
    re.canonicalize();
    im.canonicalize();
  }
  ComplexRational(long r) : re(r), im(0) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  ComplexRational conj() const { return {re, -im}; }
  cd to_complex() const { return {re.get_d(), im.get_d()}; }

  friend ComplexRational operator+(const ComplexRational& x, const ComplexRational& y) {
    return {x.re + y.re, x.im + y.im};
  }
  friend ComplexRational operator-(const ComplexRational& x, const ComplexRational& y) {
    return {x.re - y.re, x.im - y.im};
  }
  friend ComplexRational operator-(const ComplexRational& x) { return {-x.re, -x.im}; }
  friend ComplexRational operator*(const ComplexRational& x, const ComplexRational& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
  }
  friend bool operator==(const ComplexRational& x, const ComplexRational& y) {
    return x.re == y.re && x.im == y.im;
  }
};

enum class Var { z1 = 0, z2 = 1, zbar1 = 2, zbar2 = 3 };

/// General (not necessarily real-valued) polynomial in z and zbar.
class Polynomial {
public:
  using TermMap = std::map<MonomialKey, ComplexRational, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(TermMap terms);

  static Polynomial constant(const ComplexRational& c);
  static Polynomial monomial(const MonomialKey& key, const ComplexRational& c);
  static Polynomial variable(Var v);

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  int total_degree() const;

  cd evaluate(const Point& q) const;

  /// Complex conjugate as a polynomial: swaps z and zbar exponents and
  /// conjugates coefficients.
  Polynomial conjugate() const;
  Polynomial derive(Var v) const;

  friend Polynomial operator+(const Polynomial& x, const Polynomial& y);
  friend Polynomial operator-(const Polynomial& x, const Polynomial& y);
  friend Polynomial operator-(const Polynomial& x);
  friend Polynomial operator*(const Polynomial& x, const Polynomial& y);
  friend Polynomial operator*(const ComplexRational& s, const Polynomial& x);
  friend bool operator==(const Polynomial& x, const Polynomial& y) { return x.terms_ == y.terms_; }

private:
  TermMap terms_;
  std::vector<std::pair<MonomialKey, cd>> numeric_;
  std::array<int, 4> max_exp_{};
};

/// Real-valued polynomial: every coefficient c at key (a|b) is matched by
/// conj(c) at (b|a).
class HermitianPolynomial {
public:
  HermitianPolynomial() = default;

  /// Validates and merges conjugate-paired coefficients; pairs must agree
  /// within `tol` relative to the larger magnitude.
  static HermitianPolynomial from_terms(const Polynomial::TermMap& terms, double tol = 1e-12);
  /// Exact check, no merging.
  static HermitianPolynomial from_polynomial(const Polynomial& p);

  const Polynomial& poly() const { return poly_; }
  const Polynomial::TermMap& terms() const { return poly_.terms(); }

  /// Sum of real parts of the terms; exactly real by construction.
  double evaluate(const Point& q) const { return poly_.evaluate(q).real(); }

  std::optional<int> homogeneous_degree() const;

  friend HermitianPolynomial operator+(const HermitianPolynomial& x, const HermitianPolynomial& y);
  friend HermitianPolynomial operator*(const HermitianPolynomial& x, const HermitianPolynomial& y);
  friend HermitianPolynomial operator*(const mpq_class& s, const HermitianPolynomial& x);
  friend bool operator==(const HermitianPolynomial& x, const HermitianPolynomial& y) {
    return x.poly_ == y.poly_;
  }

private:
  explicit HermitianPolynomial(Polynomial p) : poly_(std::move(p)) {}
  Polynomial poly_;
};

Polynomial wirtinger_derive(const HermitianPolynomial& p, Var v);
inline Polynomial wirtinger_derive(const Polynomial& p, Var v) { return p.derive(v); }

/// Partition of a polynomial by bidegree (l, m).
struct BidegreeProfile {
  std::map<std::pair<int, int>, Polynomial> components;
  std::optional<int> total_degree;

  Polynomial reassemble() const;
};

BidegreeProfile bidegree_decompose(const HermitianPolynomial& p);

/// Substitution z -> U z (and zbar -> conj(U) zbar) for a constant matrix U
/// with complex-rational entries. Used for unitary-invariance checks.
HermitianPolynomial linear_substitute(const HermitianPolynomial& p,
                                      const std::array<std::array<ComplexRational, 2>, 2>& u);

/// Euler operator sum_mu z^mu d/dz^mu.
Polynomial holomorphic_euler(const Polynomial& p);

} // namespace mafoliate
