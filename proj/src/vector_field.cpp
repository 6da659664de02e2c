#include "mafoliate/vector_field.hpp"

namespace mafoliate {

namespace {
constexpr Var kFrame[4] = {Var::z1, Var::z2, Var::zbar1, Var::zbar2};
}

bool PolyVectorField::is_zero() const {
  for (const auto& p : c) {
    if (!p.is_zero()) return false;
  }
  return true;
}

PolyVectorField PolyVectorField::conjugate() const {
  return {{c[2].conjugate(), c[3].conjugate(), c[0].conjugate(), c[1].conjugate()}};
}

PolyVectorField PolyVectorField::type_10_part() const { return {{c[0], c[1], Polynomial{}, Polynomial{}}}; }

Polynomial PolyVectorField::apply(const Polynomial& f) const {
  Polynomial out;
  for (int j = 0; j < 4; ++j) {
    if (c[j].is_zero()) continue;
    const Polynomial df = f.derive(kFrame[j]);
    if (!df.is_zero()) out = out + c[j] * df;
  }
  return out;
}

Vec4c PolyVectorField::evaluate(const Point& q) const {
  Vec4c v;
  for (int j = 0; j < 4; ++j) v[j] = c[j].evaluate(q);
  return v;
}

PolyVectorField operator+(const PolyVectorField& x, const PolyVectorField& y) {
  PolyVectorField out;
  for (int j = 0; j < 4; ++j) out.c[j] = x.c[j] + y.c[j];
  return out;
}

PolyVectorField operator-(const PolyVectorField& x, const PolyVectorField& y) {
  PolyVectorField out;
  for (int j = 0; j < 4; ++j) out.c[j] = x.c[j] - y.c[j];
  return out;
}

PolyVectorField operator*(const Polynomial& f, const PolyVectorField& x) {
  PolyVectorField out;
  for (int j = 0; j < 4; ++j) out.c[j] = f * x.c[j];
  return out;
}

PolyVectorField lie_bracket(const PolyVectorField& v, const PolyVectorField& w) {
  PolyVectorField out;
  for (int k = 0; k < 4; ++k) out.c[k] = v.apply(w.c[k]) - w.apply(v.c[k]);
  return out;
}

FieldJet field_jet(const PolyVectorField& v, const Point& q) {
  FieldJet jet;
  for (int k = 0; k < 4; ++k) {
    jet.value[k] = v.c[k].evaluate(q);
    for (int j = 0; j < 4; ++j) jet.partial[k][j] = v.c[k].derive(kFrame[j]).evaluate(q);
  }
  return jet;
}

Vec4c bracket_at(const FieldJet& v, const FieldJet& w) {
  Vec4c out{};
  for (int k = 0; k < 4; ++k) {
    for (int j = 0; j < 4; ++j) out[k] += v.value[j] * w.partial[k][j] - w.value[j] * v.partial[k][j];
  }
  return out;
}

} // namespace mafoliate
