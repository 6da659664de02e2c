#include "mafoliate/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "mafoliate/errors.hpp"

namespace mafoliate {

namespace {

std::array<int, 4> flat(const MonomialKey& k) { return {k.a[0], k.a[1], k.b[0], k.b[1]}; }

void add_term(Polynomial::TermMap& map, const MonomialKey& key, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = map.try_emplace(key, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) map.erase(it);
  }
}

double magnitude(const ComplexRational& c) { return std::abs(c.to_complex()); }

} // namespace

bool GradedLex::operator()(const MonomialKey& x, const MonomialKey& y) const {
  const int dx = x.total_degree();
  const int dy = y.total_degree();
  if (dx != dy) return dx < dy;
  return flat(x) > flat(y);
}

Polynomial::Polynomial(TermMap terms) {
  for (auto& [key, c] : terms) {
    for (int e : flat(key)) {
      if (e < 0) throw Error(ErrorKind::NegativeExponent, "negative exponent in monomial key");
    }
    if (!c.is_zero()) terms_.emplace(key, c);
  }
  numeric_.reserve(terms_.size());
  for (const auto& [key, c] : terms_) {
    numeric_.emplace_back(key, c.to_complex());
    const auto e = flat(key);
    for (int i = 0; i < 4; ++i) max_exp_[i] = std::max(max_exp_[i], e[i]);
  }
}

Polynomial Polynomial::constant(const ComplexRational& c) { return monomial(MonomialKey{}, c); }

Polynomial Polynomial::monomial(const MonomialKey& key, const ComplexRational& c) {
  TermMap m;
  m.emplace(key, c);
  return Polynomial(std::move(m));
}

Polynomial Polynomial::variable(Var v) {
  MonomialKey k;
  switch (v) {
  case Var::z1: k.a[0] = 1; break;
  case Var::z2: k.a[1] = 1; break;
  case Var::zbar1: k.b[0] = 1; break;
  case Var::zbar2: k.b[1] = 1; break;
  }
  return monomial(k, ComplexRational(1));
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [key, c] : terms_) d = std::max(d, key.total_degree());
  return d;
}

cd Polynomial::evaluate(const Point& q) const {
  if (numeric_.empty()) return {0.0, 0.0};
  const std::array<cd, 4> base{q.z1, q.z2, std::conj(q.z1), std::conj(q.z2)};
  std::array<std::vector<cd>, 4> powers;
  for (int i = 0; i < 4; ++i) {
    powers[i].resize(static_cast<std::size_t>(max_exp_[i]) + 1);
    powers[i][0] = 1.0;
    for (int e = 1; e <= max_exp_[i]; ++e) powers[i][e] = powers[i][e - 1] * base[i];
  }
  cd sum{0.0, 0.0};
  for (const auto& [key, c] : numeric_) {
    sum += c * powers[0][key.a[0]] * powers[1][key.a[1]] * powers[2][key.b[0]] * powers[3][key.b[1]];
  }
  return sum;
}

Polynomial Polynomial::conjugate() const {
  TermMap out;
  for (const auto& [key, c] : terms_) out.emplace(key.conjugate(), c.conj());
  return Polynomial(std::move(out));
}

Polynomial Polynomial::derive(Var v) const {
  TermMap out;
  for (const auto& [key, c] : terms_) {
    MonomialKey k = key;
    int* e = nullptr;
    switch (v) {
    case Var::z1: e = &k.a[0]; break;
    case Var::z2: e = &k.a[1]; break;
    case Var::zbar1: e = &k.b[0]; break;
    case Var::zbar2: e = &k.b[1]; break;
    }
    if (*e == 0) continue;
    const long factor = *e;
    --*e;
    add_term(out, k, ComplexRational(factor) * c);
  }
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& x, const Polynomial& y) {
  Polynomial::TermMap out = x.terms_;
  for (const auto& [key, c] : y.terms_) add_term(out, key, c);
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& x) {
  Polynomial::TermMap out;
  for (const auto& [key, c] : x.terms_) out.emplace(key, -c);
  return Polynomial(std::move(out));
}

Polynomial operator-(const Polynomial& x, const Polynomial& y) {
  Polynomial::TermMap out = x.terms_;
  for (const auto& [key, c] : y.terms_) add_term(out, key, -c);
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& x, const Polynomial& y) {
  Polynomial::TermMap out;
  for (const auto& [kx, cx] : x.terms_) {
    for (const auto& [ky, cy] : y.terms_) {
      const MonomialKey k{{kx.a[0] + ky.a[0], kx.a[1] + ky.a[1]}, {kx.b[0] + ky.b[0], kx.b[1] + ky.b[1]}};
      add_term(out, k, cx * cy);
    }
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(const ComplexRational& s, const Polynomial& x) {
  Polynomial::TermMap out;
  if (s.is_zero()) return Polynomial{};
  for (const auto& [key, c] : x.terms_) out.emplace(key, s * c);
  return Polynomial(std::move(out));
}

HermitianPolynomial HermitianPolynomial::from_terms(const Polynomial::TermMap& terms, double tol) {
  Polynomial::TermMap merged;
  for (const auto& [key, c] : terms) {
    const MonomialKey partner = key.conjugate();
    auto it = terms.find(partner);
    const ComplexRational other = it == terms.end() ? ComplexRational{} : it->second;
    const ComplexRational target = other.conj();
    const double scale = std::max(magnitude(c), magnitude(target));
    const double gap = magnitude(c - target);
    if (gap > tol * scale) {
      throw Error(ErrorKind::RealityViolation,
                  "coefficient at (" + std::to_string(key.a[0]) + "," + std::to_string(key.a[1]) + "|" +
                      std::to_string(key.b[0]) + "," + std::to_string(key.b[1]) +
                      ") lacks a conjugate partner");
    }
    // Average with the conjugate partner so the stored pair is exactly paired.
    ComplexRational avg{(c.re + target.re) / 2, (c.im + target.im) / 2};
    if (!avg.is_zero()) merged.emplace(key, avg);
  }
  return HermitianPolynomial(Polynomial(std::move(merged)));
}

HermitianPolynomial HermitianPolynomial::from_polynomial(const Polynomial& p) {
  for (const auto& [key, c] : p.terms()) {
    auto it = p.terms().find(key.conjugate());
    if (it == p.terms().end() || !(it->second == c.conj())) {
      throw Error(ErrorKind::RealityViolation, "polynomial is not real-valued");
    }
  }
  return HermitianPolynomial(p);
}

std::optional<int> HermitianPolynomial::homogeneous_degree() const {
  std::optional<int> d;
  for (const auto& [key, c] : terms()) {
    if (!d) d = key.total_degree();
    else if (*d != key.total_degree()) return std::nullopt;
  }
  return d;
}

HermitianPolynomial operator+(const HermitianPolynomial& x, const HermitianPolynomial& y) {
  return HermitianPolynomial(x.poly_ + y.poly_);
}

HermitianPolynomial operator*(const HermitianPolynomial& x, const HermitianPolynomial& y) {
  return HermitianPolynomial(x.poly_ * y.poly_);
}

HermitianPolynomial operator*(const mpq_class& s, const HermitianPolynomial& x) {
  return HermitianPolynomial(ComplexRational(s) * x.poly_);
}

Polynomial wirtinger_derive(const HermitianPolynomial& p, Var v) { return p.poly().derive(v); }

Polynomial BidegreeProfile::reassemble() const {
  Polynomial sum;
  for (const auto& [bideg, part] : components) sum = sum + part;
  return sum;
}

BidegreeProfile bidegree_decompose(const HermitianPolynomial& p) {
  std::map<std::pair<int, int>, Polynomial::TermMap> parts;
  for (const auto& [key, c] : p.terms()) parts[key.bidegree()].emplace(key, c);
  BidegreeProfile profile;
  for (auto& [bideg, terms] : parts) profile.components.emplace(bideg, Polynomial(std::move(terms)));
  profile.total_degree = p.homogeneous_degree();
  return profile;
}

namespace {

Polynomial power(const Polynomial& base, int e) {
  Polynomial out = Polynomial::constant(ComplexRational(1));
  for (int i = 0; i < e; ++i) out = out * base;
  return out;
}

} // namespace

HermitianPolynomial linear_substitute(const HermitianPolynomial& p,
                                      const std::array<std::array<ComplexRational, 2>, 2>& u) {
  std::array<Polynomial, 4> image;
  for (int mu = 0; mu < 2; ++mu) {
    image[mu] = u[mu][0] * Polynomial::variable(Var::z1) + u[mu][1] * Polynomial::variable(Var::z2);
    image[2 + mu] = image[mu].conjugate();
  }
  Polynomial out;
  for (const auto& [key, c] : p.terms()) {
    Polynomial term = Polynomial::constant(c);
    const auto e = flat(key);
    for (int i = 0; i < 4; ++i) term = term * power(image[i], e[i]);
    out = out + term;
  }
  return HermitianPolynomial::from_polynomial(out);
}

Polynomial holomorphic_euler(const Polynomial& p) {
  return Polynomial::variable(Var::z1) * p.derive(Var::z1) + Polynomial::variable(Var::z2) * p.derive(Var::z2);
}

} // namespace mafoliate
