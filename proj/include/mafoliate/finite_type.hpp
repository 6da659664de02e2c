#pragma once

// Bracket towers of the tangential field L = rho_2 d1 - rho_1 d2, point type
// in the Kohn / Bloom-Graham sense, the bracket identities of the complex
// gradient, and the extension of Z across Levi-degenerate points.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mafoliate/jet.hpp"
#include "mafoliate/monge_ampere.hpp"
#include "mafoliate/vector_field.hpp"

namespace mafoliate {

/// Bracket expression over the generators L and Lbar.
class BracketWord {
public:
  enum class Generator { L, Lbar };

  static BracketWord generator(Generator g);
  static BracketWord bracket(const BracketWord& left, const BracketWord& right);

  int length() const;
  bool is_generator() const;
  std::string to_string() const;

  friend bool operator==(const BracketWord& x, const BracketWord& y) { return x.to_string() == y.to_string(); }

private:
  struct Node {
    std::optional<Generator> gen;
    std::shared_ptr<const Node> left, right;
    int length = 1;
  };
  explicit BracketWord(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

PolyVectorField tangential_field(const HermitianPolynomial& p);

inline constexpr int kDefaultTypeCap = 8;
inline constexpr double kDefaultTypeTol = 1e-8;

struct TypeReport {
  Point point;
  /// Empty when no bracket up to m_max pairs nontrivially ("exceeds_cap").
  std::optional<int> type_m;
  std::optional<BracketWord> witness;
  PolyVectorField witness_field;
  cd pairing_value;
  double threshold = 0.0;
  int m_max = kDefaultTypeCap;
};

/// Breadth-first over left-normed words; a word pairs "nontrivially" when
/// |drho(W)(q)| exceeds tol * (1 + max(|rho_1(q)|, |rho_2(q)|)).
TypeReport point_type(const HermitianPolynomial& p, const Point& q, int m_max = kDefaultTypeCap,
                      double tol = kDefaultTypeTol);

/// Symbolic and pointwise calculus for L, Z = W/D (W the cofactor numerators)
/// and their conjugates. Built once per polynomial.
class GradientCalculus {
public:
  explicit GradientCalculus(const HermitianPolynomial& p);

  const Exhaustion& exhaustion() const { return ex_; }
  const PolyVectorField& L() const { return L_; }
  const PolyVectorField& Lbar() const { return Lbar_; }
  /// (1,0) field with components D*Z^mu.
  const PolyVectorField& W() const { return W_; }
  const Polynomial& D() const { return D_; }

  FieldJet L_jet(const Point& q) const { return field_jet(L_, q); }
  FieldJet Lbar_jet(const Point& q) const { return field_jet(Lbar_, q); }
  /// Quotient rule on W/D with exact polynomial partials.
  FieldJet Z_jet(const Point& q, double eps_D = kDefaultEpsD) const;
  FieldJet Zbar_jet(const Point& q, double eps_D = kDefaultEpsD) const;

private:
  FieldJet quotient_jet(const PolyVectorField& numer, const Point& q, double eps_D) const;

  Exhaustion ex_;
  PolyVectorField L_, Lbar_, W_, Wbar_;
  Polynomial D_;
};

/// Central finite differences of complex_gradient in real coordinates,
/// converted to Wirtinger partials. Independent of the symbolic route.
FieldJet gradient_jet_fd(const Exhaustion& ex, const Point& q, double h, bool conjugate_field,
                         double eps_D = kDefaultEpsD);

/// Exact check that [L, Lbar] - (W - conj(W)) is the zero field, i.e. the
/// identity [L, Lbar] = D (Z - Zbar) multiplied through by D.
bool tangential_bracket_identity_holds(const GradientCalculus& calc);

enum class ZSource { Symbolic, FiniteDifference };

struct BracketIdentityReport {
  Point point;
  double D = 0.0;
  double defect_LLbar = 0.0;  ///< max_k |[L,Lbar]^k - D (Z - Zbar)^k|
  double scale_LLbar = 0.0;   ///< 1 + |D| |Z|
  double defect_LZ = 0.0;     ///< [L,Z] in span{L}
  double defect_LZbar = 0.0;  ///< [L,Zbar] in span{L, Lbar}
  double defect_ZZbar = 0.0;  ///< [Z,Zbar] in span{L, Lbar}
  cd drho_ZZbar;              ///< drho([Z,Zbar])
  cd phi1, psi1, psi2, eta1, eta2;
};

BracketIdentityReport bracket_identities_check(const GradientCalculus& calc, const Point& q,
                                               ZSource source = ZSource::Symbolic, double eps_D = kDefaultEpsD);
BracketIdentityReport bracket_identities_check(const HermitianPolynomial& p, const Point& q,
                                               double eps_D = kDefaultEpsD);

struct ExtensionIngredients {
  PolyVectorField V;  ///< (1,0) part of the witness field
  cd phi;             ///< drho(V)(q) / rho(q)
  TypeReport type;
};

ExtensionIngredients extension_ingredients(const HermitianPolynomial& p, const Point& q,
                                           int m_max = kDefaultTypeCap, double tol = kDefaultTypeTol);

struct ExtensionOptions {
  double eps_D = kDefaultEpsD;
  double tol_ext = 1e-7;
  /// Unit directions in C^2; empty means the eight default rays.
  std::vector<Vec2c> rays;
  double h_start = 0.2;
  int levels = 5;
  /// Tangent d(Phi)/d(zeta1) of a holomorphic leaf chart at the preimage of
  /// q, where leaves are {zeta2 = const}. Enables the 1/u_1 cross-check.
  std::function<Vec2c(const Point&)> leaf_tangent;
};

std::vector<Vec2c> default_rays();

struct ExtendedGradient {
  GradientValue gradient;
  std::vector<Vec2c> ray_limits;
  double spread = 0.0;
  std::optional<Vec2c> chart_value;
};

/// Limit of complex_gradient along rays q + h d, Richardson-extrapolated in h.
ExtendedGradient extend_gradient(const Exhaustion& ex, const Point& q, const ExtensionOptions& opts = {});
ExtendedGradient extend_gradient(const HermitianPolynomial& p, const Point& q, const ExtensionOptions& opts = {});

/// Checks V = phi Z + A L at q with the extended Z: returns A and the
/// residual of V - phi Z off span{L}, relative to 1 + |V|.
struct ExtensionDecomposition {
  cd phi;
  cd A;
  double defect = 0.0;
};

ExtensionDecomposition extension_decomposition(const HermitianPolynomial& p, const Point& q,
                                               const ExtensionOptions& opts = {}, int m_max = kDefaultTypeCap);

nlohmann::json to_json(const TypeReport& r);

} // namespace mafoliate
