#include "mafoliate/finite_type.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mafoliate/errors.hpp"

namespace mafoliate {

// ---------------------------------------------------------------- words

BracketWord BracketWord::generator(Generator g) {
  auto n = std::make_shared<Node>();
  n->gen = g;
  return BracketWord(std::move(n));
}

BracketWord BracketWord::bracket(const BracketWord& left, const BracketWord& right) {
  auto n = std::make_shared<Node>();
  n->left = left.node_;
  n->right = right.node_;
  n->length = left.length() + right.length();
  return BracketWord(std::move(n));
}

int BracketWord::length() const { return node_->length; }
bool BracketWord::is_generator() const { return node_->gen.has_value(); }

std::string BracketWord::to_string() const {
  if (node_->gen) return *node_->gen == Generator::L ? "L" : "Lbar";
  return "[" + BracketWord(node_->left).to_string() + "," + BracketWord(node_->right).to_string() + "]";
}

// ---------------------------------------------------------------- type

PolyVectorField tangential_field(const HermitianPolynomial& p) {
  const Polynomial r1 = p.poly().derive(Var::z1);
  const Polynomial r2 = p.poly().derive(Var::z2);
  return {{r2, -r1, Polynomial{}, Polynomial{}}};
}

namespace {

cd pair_with_drho(const Vec4c& field, cd d1, cd d2) { return d1 * field[0] + d2 * field[1]; }

bool same_up_to_sign(const PolyVectorField& x, const PolyVectorField& y) {
  if (x == y) return true;
  for (int k = 0; k < 4; ++k) {
    if (!(x.c[k] == -y.c[k])) return false;
  }
  return true;
}

} // namespace

TypeReport point_type(const HermitianPolynomial& p, const Point& q, int m_max, double tol) {
  const cd d1 = p.poly().derive(Var::z1).evaluate(q);
  const cd d2 = p.poly().derive(Var::z2).evaluate(q);
  const double rho = p.evaluate(q);
  if (!(rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "point_type requires rho(q) > 0");
  const double grad = std::max(std::abs(d1), std::abs(d2));
  if (grad == 0.0) throw Error(ErrorKind::ZeroDifferential, "drho vanishes at the point");

  TypeReport report;
  report.point = q;
  report.m_max = m_max;
  report.threshold = tol * (1.0 + grad);

  using Gen = BracketWord::Generator;
  const PolyVectorField L = tangential_field(p);
  const PolyVectorField Lbar = L.conjugate();
  const BracketWord wL = BracketWord::generator(Gen::L);
  const BracketWord wLbar = BracketWord::generator(Gen::Lbar);

  std::vector<std::pair<BracketWord, PolyVectorField>> level{{wL, L}, {wLbar, Lbar}};
  for (int m = 1; m <= m_max; ++m) {
    if (m == 2) {
      level = {{BracketWord::bracket(wL, wLbar), lie_bracket(L, Lbar)}};
    } else if (m > 2) {
      std::vector<std::pair<BracketWord, PolyVectorField>> next;
      for (const auto& [word, field] : level) {
        for (const auto& [gen_word, gen_field] : {std::pair{wL, L}, std::pair{wLbar, Lbar}}) {
          PolyVectorField b = lie_bracket(field, gen_field);
          if (b.is_zero()) continue;
          const bool dup = std::any_of(next.begin(), next.end(),
                                       [&](const auto& e) { return same_up_to_sign(e.second, b); });
          if (!dup) next.emplace_back(BracketWord::bracket(word, gen_word), std::move(b));
        }
      }
      level = std::move(next);
    }
    const std::pair<BracketWord, PolyVectorField>* best = nullptr;
    cd best_val{0.0, 0.0};
    for (const auto& entry : level) {
      const cd v = pair_with_drho(entry.second.evaluate(q), d1, d2);
      if (std::abs(v) > report.threshold && std::abs(v) > std::abs(best_val)) {
        best = &entry;
        best_val = v;
      }
    }
    if (best) {
      report.type_m = m;
      report.witness = best->first;
      report.witness_field = best->second;
      report.pairing_value = best_val;
      return report;
    }
    if (level.empty()) break;
  }
  return report;
}

// ---------------------------------------------------------------- calculus

GradientCalculus::GradientCalculus(const HermitianPolynomial& p) : ex_(p) {
  L_ = tangential_field(p);
  Lbar_ = L_.conjugate();
  const Polynomial& h11 = ex_.mixed(0, 0);
  const Polynomial& h12 = ex_.mixed(0, 1);
  const Polynomial& h21 = ex_.mixed(1, 0);
  const Polynomial& h22 = ex_.mixed(1, 1);
  W_.c[0] = h22 * ex_.dbar(0) - h21 * ex_.dbar(1);
  W_.c[1] = h11 * ex_.dbar(1) - h12 * ex_.dbar(0);
  Wbar_ = W_.conjugate();
  D_ = h11 * h22 - h12 * h21;
}

FieldJet GradientCalculus::quotient_jet(const PolyVectorField& numer, const Point& q, double eps_D) const {
  const double d = D_.evaluate(q).real();
  if (!(d > eps_D)) throw Error(ErrorKind::DegenerateLevi, "Z jet requested where D <= eps_D");
  const FieldJet wj = field_jet(numer, q);
  const Var frame[4] = {Var::z1, Var::z2, Var::zbar1, Var::zbar2};
  Vec4c dD;
  for (int j = 0; j < 4; ++j) dD[j] = D_.derive(frame[j]).evaluate(q);
  FieldJet out;
  for (int k = 0; k < 4; ++k) {
    out.value[k] = wj.value[k] / d;
    for (int j = 0; j < 4; ++j) out.partial[k][j] = (wj.partial[k][j] * d - wj.value[k] * dD[j]) / (d * d);
  }
  return out;
}

FieldJet GradientCalculus::Z_jet(const Point& q, double eps_D) const { return quotient_jet(W_, q, eps_D); }
FieldJet GradientCalculus::Zbar_jet(const Point& q, double eps_D) const { return quotient_jet(Wbar_, q, eps_D); }

FieldJet gradient_jet_fd(const Exhaustion& ex, const Point& q, double h, bool conjugate_field, double eps_D) {
  auto field_at = [&](const Point& x) {
    const GradientValue g = complex_gradient(ex.jet(x), eps_D);
    if (conjugate_field) return Vec4c{0.0, 0.0, std::conj(g.Z1), std::conj(g.Z2)};
    return Vec4c{g.Z1, g.Z2, 0.0, 0.0};
  };
  FieldJet out;
  out.value = field_at(q);
  const cd i{0.0, 1.0};
  const Point steps[4] = {{h, 0.0}, {i * h, 0.0}, {0.0, h}, {0.0, i * h}};
  std::array<Vec4c, 4> real_partial;  // along x1, y1, x2, y2
  for (int r = 0; r < 4; ++r) {
    const Vec4c fp = field_at(q + steps[r]);
    const Vec4c fm = field_at(q - steps[r]);
    for (int k = 0; k < 4; ++k) real_partial[r][k] = (fp[k] - fm[k]) / (2.0 * h);
  }
  for (int k = 0; k < 4; ++k) {
    for (int mu = 0; mu < 2; ++mu) {
      const cd dx = real_partial[2 * mu][k];
      const cd dy = real_partial[2 * mu + 1][k];
      out.partial[k][mu] = 0.5 * (dx - i * dy);
      out.partial[k][2 + mu] = 0.5 * (dx + i * dy);
    }
  }
  return out;
}

bool tangential_bracket_identity_holds(const GradientCalculus& calc) {
  const PolyVectorField lhs = lie_bracket(calc.L(), calc.Lbar());
  const PolyVectorField rhs = calc.W() - calc.W().conjugate();
  return (lhs - rhs).is_zero();
}

namespace {

/// Least-squares coefficients of v on the given basis vectors and the
/// residual norm. Basis vectors here have disjoint supports or are single,
/// so the normal equations are diagonal.
struct SpanFit {
  std::vector<cd> coeffs;
  double residual = 0.0;
};

SpanFit fit_span(const Vec4c& v, const std::vector<Vec4c>& basis) {
  SpanFit fit;
  Vec4c r = v;
  for (const Vec4c& b : basis) {
    double nb = 0.0;
    cd ip{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
      nb += std::norm(b[k]);
      ip += std::conj(b[k]) * v[k];
    }
    const cd c = nb > 0.0 ? ip / nb : cd{0.0, 0.0};
    fit.coeffs.push_back(c);
    for (int k = 0; k < 4; ++k) r[k] -= c * b[k];
  }
  fit.residual = norm4(r);
  return fit;
}

} // namespace

BracketIdentityReport bracket_identities_check(const GradientCalculus& calc, const Point& q, ZSource source,
                                               double eps_D) {
  const WirtingerJet jet = calc.exhaustion().jet(q);
  if (!(jet.D > eps_D)) throw Error(ErrorKind::DegenerateLevi, "bracket identities need D > eps_D");

  const FieldJet L = calc.L_jet(q);
  const FieldJet Lbar = calc.Lbar_jet(q);
  FieldJet Z, Zbar;
  if (source == ZSource::Symbolic) {
    Z = calc.Z_jet(q, eps_D);
    Zbar = calc.Zbar_jet(q, eps_D);
  } else {
    const double h = 1e-5 * (1.0 + q.norm());
    Z = gradient_jet_fd(calc.exhaustion(), q, h, false, eps_D);
    Zbar = gradient_jet_fd(calc.exhaustion(), q, h, true, eps_D);
  }

  BracketIdentityReport r;
  r.point = q;
  r.D = jet.D;

  const Vec4c LLbar = bracket_at(L, Lbar);
  double zmag = 0.0;
  for (int k = 0; k < 4; ++k) {
    const cd expected = jet.D * (Z.value[k] - Zbar.value[k]);
    r.defect_LLbar = std::max(r.defect_LLbar, std::abs(LLbar[k] - expected));
    zmag = std::max(zmag, std::abs(Z.value[k]));
  }
  r.scale_LLbar = 1.0 + std::abs(jet.D) * zmag;

  const Vec4c LZ = bracket_at(L, Z);
  const SpanFit b = fit_span(LZ, {L.value});
  r.phi1 = b.coeffs[0];
  r.defect_LZ = b.residual / (1.0 + norm4(LZ));

  const Vec4c LZbar = bracket_at(L, Zbar);
  const SpanFit c = fit_span(LZbar, {L.value, Lbar.value});
  r.psi1 = c.coeffs[0];
  r.psi2 = c.coeffs[1];
  r.defect_LZbar = c.residual / (1.0 + norm4(LZbar));

  const Vec4c ZZbar = bracket_at(Z, Zbar);
  const SpanFit d = fit_span(ZZbar, {L.value, Lbar.value});
  r.eta1 = d.coeffs[0];
  r.eta2 = d.coeffs[1];
  r.defect_ZZbar = d.residual / (1.0 + norm4(ZZbar));
  r.drho_ZZbar = jet.d1 * ZZbar[0] + jet.d2 * ZZbar[1];
  return r;
}

BracketIdentityReport bracket_identities_check(const HermitianPolynomial& p, const Point& q, double eps_D) {
  return bracket_identities_check(GradientCalculus(p), q, ZSource::Symbolic, eps_D);
}

// ---------------------------------------------------------------- extension

ExtensionIngredients extension_ingredients(const HermitianPolynomial& p, const Point& q, int m_max, double tol) {
  ExtensionIngredients out;
  out.type = point_type(p, q, m_max, tol);
  if (!out.type.type_m) {
    throw Error(ErrorKind::TypeCapExceeded, "no bracket up to length " + std::to_string(m_max) + " pairs with drho");
  }
  out.V = out.type.witness_field.type_10_part();
  const Vec4c v = out.V.evaluate(q);
  const cd d1 = p.poly().derive(Var::z1).evaluate(q);
  const cd d2 = p.poly().derive(Var::z2).evaluate(q);
  out.phi = (d1 * v[0] + d2 * v[1]) / p.evaluate(q);
  if (!(std::abs(out.phi) * p.evaluate(q) > out.type.threshold)) {
    throw Error(ErrorKind::VanishingPhi, "phi = drho(V)/rho vanishes at the point");
  }
  return out;
}

std::vector<Vec2c> default_rays() {
  std::vector<Vec2c> rays;
  for (int k = 0; k < 8; ++k) {
    const double theta = 0.35 + 0.11 * k;  // stays inside (0, pi/2): both components nonzero
    const double alpha = 2.0 * std::numbers::pi * k / 8.0 + 0.1;
    const double beta = 2.0 * std::numbers::pi * ((3 * k) % 8) / 8.0 + 0.7;
    rays.push_back({std::polar(std::cos(theta), alpha), std::polar(std::sin(theta), beta)});
  }
  return rays;
}

namespace {

/// Neville extrapolation of samples (h_i, y_i) to h = 0. Also returns the
/// difference between the two highest-order estimates.
std::pair<cd, double> extrapolate_to_zero(const std::vector<double>& h, std::vector<cd> y) {
  const std::size_t n = y.size();
  cd previous = y[n - 1];
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      y[i] = (h[i + m] * y[i] - h[i] * y[i + 1]) / (h[i + m] - h[i]);
    }
    if (m == n - 1) previous = y[1];
  }
  return {y[0], n > 1 ? std::abs(y[0] - previous) : 0.0};
}

constexpr double kHysteresis = 10.0;
constexpr double kMinRayStep = 1e-4;

} // namespace

ExtendedGradient extend_gradient(const Exhaustion& ex, const Point& q, const ExtensionOptions& opts) {
  const WirtingerJet base = ex.jet(q);
  if (!(base.rho > 0.0)) throw Error(ErrorKind::NonPositiveRho, "extension requires rho(q) > 0");
  const std::vector<Vec2c> rays = opts.rays.empty() ? default_rays() : opts.rays;

  ExtendedGradient out;
  for (const Vec2c& d : rays) {
    const Point dir{d[0], d[1]};
    std::vector<double> hs;
    std::vector<GradientValue> vals;
    for (double h = opts.h_start; h >= kMinRayStep; h *= 0.5) {
      const WirtingerJet j = ex.jet(q + h * dir);
      if (j.rho > 0.0 && j.D > kHysteresis * opts.eps_D) {
        hs.push_back(h);
        vals.push_back(complex_gradient(j, opts.eps_D));
      } else if (!hs.empty()) {
        // Closest contiguous run to q ends here.
        break;
      }
    }
    if (hs.size() < 2) continue;
    const std::size_t keep = std::min<std::size_t>(hs.size(), static_cast<std::size_t>(opts.levels));
    const std::vector<double> h_used(hs.end() - keep, hs.end());
    std::vector<cd> z1, z2;
    for (std::size_t i = hs.size() - keep; i < hs.size(); ++i) {
      z1.push_back(vals[i].Z1);
      z2.push_back(vals[i].Z2);
    }
    out.ray_limits.push_back({extrapolate_to_zero(h_used, z1).first, extrapolate_to_zero(h_used, z2).first});
  }
  if (out.ray_limits.empty()) {
    throw Error(ErrorKind::AllRaysDegenerate, "every approach ray stays in the degenerate set");
  }

  Vec2c mean{0.0, 0.0};
  for (const Vec2c& z : out.ray_limits) {
    mean[0] += z[0];
    mean[1] += z[1];
  }
  mean[0] /= static_cast<double>(out.ray_limits.size());
  mean[1] /= static_cast<double>(out.ray_limits.size());
  const double scale = norm2(mean) + 1e-300;
  for (const Vec2c& z : out.ray_limits) {
    out.spread = std::max(out.spread, norm2({z[0] - mean[0], z[1] - mean[1]}) / scale);
  }
  if (out.spread > opts.tol_ext) {
    throw Error(ErrorKind::NoConvergence,
                "ray limits disagree: relative spread " + std::to_string(out.spread));
  }

  if (opts.leaf_tangent) {
    const Vec2c t = opts.leaf_tangent(q);
    const cd dt = base.drho(t);
    if (std::abs(dt) == 0.0) throw Error(ErrorKind::InvalidInput, "leaf tangent lies in ker drho");
    const Vec2c zc{base.rho * t[0] / dt, base.rho * t[1] / dt};
    out.chart_value = zc;
    if (norm2({zc[0] - mean[0], zc[1] - mean[1]}) > opts.tol_ext * scale) {
      throw Error(ErrorKind::NoConvergence, "leaf-chart value of Z disagrees with the ray limit");
    }
  }

  out.gradient.Z1 = mean[0];
  out.gradient.Z2 = mean[1];
  out.gradient.pairing_check = base.drho(mean) - base.rho;
  return out;
}

ExtendedGradient extend_gradient(const HermitianPolynomial& p, const Point& q, const ExtensionOptions& opts) {
  return extend_gradient(Exhaustion(p), q, opts);
}

ExtensionDecomposition extension_decomposition(const HermitianPolynomial& p, const Point& q,
                                               const ExtensionOptions& opts, int m_max) {
  const ExtensionIngredients ing = extension_ingredients(p, q, m_max);
  const Exhaustion ex(p);
  const WirtingerJet jet = ex.jet(q);
  const ExtendedGradient z = extend_gradient(ex, q, opts);
  const Vec4c v = ing.V.evaluate(q);
  const Vec2c r{v[0] - ing.phi * z.gradient.Z1, v[1] - ing.phi * z.gradient.Z2};
  const Vec2c l = tangential_vector(jet);
  const double nl = std::norm(l[0]) + std::norm(l[1]);
  ExtensionDecomposition out;
  out.phi = ing.phi;
  out.A = (std::conj(l[0]) * r[0] + std::conj(l[1]) * r[1]) / nl;
  out.defect = norm2({r[0] - out.A * l[0], r[1] - out.A * l[1]}) / (1.0 + norm2({v[0], v[1]}));
  return out;
}

nlohmann::json to_json(const TypeReport& r) {
  nlohmann::json j;
  j["point"] = {r.point.z1.real(), r.point.z1.imag(), r.point.z2.real(), r.point.z2.imag()};
  if (r.type_m) j["type_m"] = *r.type_m;
  else j["type_m"] = "exceeds_cap";
  j["witness"] = r.witness ? nlohmann::json(r.witness->to_string()) : nlohmann::json(nullptr);
  j["pairing_value"] = {r.pairing_value.real(), r.pairing_value.imag()};
  j["threshold"] = r.threshold;
  j["m_max"] = r.m_max;
  return j;
}

} // namespace mafoliate
