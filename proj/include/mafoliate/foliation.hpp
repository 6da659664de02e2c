#pragma once

// Flows of the extended complex gradient and the analyses built on them:
// leaf tracing f(t+is) = phi_t(psi_s(p)), leaf diagnostics, holomorphic
// fitting of Z, the zero-set check, weight extraction, weighted homogeneity,
// level-set transport and the bidegree verdict for homogeneous exhaustions.
//
// Flow normalization: the t-flow solves dz/dt = Z(z) and the s-flow solves
// dz/ds = i Z(z), so f is holomorphic with f' = Z(f). Under Z(rho) = rho
// this gives rho(phi_t(p)) = e^{2t} rho(p); the rate is measured, never
// assumed.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mafoliate/finite_type.hpp"
#include "mafoliate/jet.hpp"
#include "mafoliate/monge_ampere.hpp"

namespace mafoliate {

struct FlowConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-3;
  /// Bound on right-hand-side evaluations per integration.
  std::size_t max_steps = 2'000'000;
  double eps_D = kDefaultEpsD;
  /// Leave extension mode only once D > hysteresis * eps_D.
  double hysteresis = 10.0;
  ExtensionOptions extension;
  /// Keep the nodes reached so far instead of throwing on a failed row.
  bool allow_partial = false;
};

/// Evaluates the (extended) gradient Z with the degenerate handoff.
class GradientField {
public:
  GradientField(const HermitianPolynomial& p, FlowConfig cfg);

  const Exhaustion& exhaustion() const { return ex_; }
  const FlowConfig& config() const { return cfg_; }

  /// `extended` is the caller's handoff state; it is updated in place.
  Vec2c operator()(const Point& q, bool& extended) const;
  Vec2c operator()(const Point& q) const;

private:
  Exhaustion ex_;
  FlowConfig cfg_;
};

/// Integrates dz/dt = direction * Z(z) from `start` and returns the states
/// at the given non-negative, ascending times.
std::vector<Point> flow_to_times(const GradientField& field, const Point& start, cd direction,
                                 const std::vector<double>& times);

struct LeafGrid {
  double t_min = 0.0, t_max = 1.0;
  double s_min = 0.0, s_max = 1.0;
  double h = 0.05;

  std::size_t nt() const;
  std::size_t ns() const;
  double t(std::size_t i) const { return t_min + static_cast<double>(i) * h; }
  double s(std::size_t j) const { return s_min + static_cast<double>(j) * h; }
};

struct LeafTrace {
  Point seed;
  LeafGrid grid;
  /// Row-major over s: index = j * nt + i.
  std::vector<Point> points;
  std::vector<Vec2c> z_values;
  std::vector<double> rho_values;
  std::vector<double> u_values;
  std::vector<bool> reached;
  bool complete = false;
  std::string failure;
  /// max |rho(psi_s(seed)) - rho(seed)| / rho(seed) over the s nodes.
  double level_defect = 0.0;
  /// Least-squares rate c in rho(phi_t) = e^{ct} rho.
  double growth_rate = 0.0;
  /// max relative deviation of per-interval rates from growth_rate.
  double rate_spread = 0.0;

  std::size_t index(std::size_t i_t, std::size_t j_s) const { return j_s * grid.nt() + i_t; }
};

LeafTrace trace_leaf(const HermitianPolynomial& p, const Point& seed, const LeafGrid& grid,
                     const FlowConfig& cfg = {});

struct LeafDiagnostics {
  /// 5-point Laplacian of u in (t, s), interior max.
  double harmonicity_defect_u = 0.0;
  /// Same stencil over u and the coordinate functions Re/Im f^mu, all of
  /// which are harmonic on a holomorphically parametrized leaf.
  double harmonicity_defect = 0.0;
  bool monotone_growth = false;
  double growth_rate = 0.0;
  double rate_spread = 0.0;
  /// max of |d_t f - Z(f)| and |d_s f - i Z(f)| by central differences.
  double parametrization_defect = 0.0;
  /// max |f1 p2 - f2 p1| / (|f| |p|): distance from the complex line C*seed.
  double radiality_defect = 0.0;
  double level_defect = 0.0;
};

LeafDiagnostics leaf_diagnostics(const LeafTrace& trace);

/// Rough roundoff floor for a 5-point Laplacian of values of size `scale`
/// carrying absolute noise `noise`.
inline double laplacian_noise_floor(double scale, double noise, double h) {
  return 8.0 * (noise + 1e-15 * scale) / (h * h);
}

// ------------------------------------------------------------ holomorphic fit

struct HolomorphicFit {
  int degree = 1;
  std::vector<std::array<int, 2>> exponents;
  std::vector<cd> coeff1, coeff2;
  double max_sample_residual = 0.0;
  /// max |drho(Z_fit) - rho| / rho on held-out points.
  double max_heldout_residual = 0.0;
  std::size_t fit_samples = 0;
  std::size_t heldout_samples = 0;

  Vec2c evaluate(const Point& q) const;
  Eigen::Matrix2cd jacobian(const Point& q) const;
  double nonlinear_mass() const;
  std::optional<cd> coefficient(int component, int a1, int a2) const;

  /// Synthetic linear field z -> J z + c0.
  static HolomorphicFit linear(const Eigen::Matrix2cd& J, Vec2c c0 = {0.0, 0.0});
};

std::vector<std::array<int, 2>> holomorphic_monomials(int degree);

HolomorphicFit fit_holomorphic_Z(const HermitianPolynomial& p, const std::vector<Point>& samples, int degree,
                                 double eps_D = kDefaultEpsD);

struct ZeroSetReport {
  std::vector<double> radii;
  std::vector<double> min_norm;  ///< min |Z| on the sphere of each radius
  double min_ratio = 0.0;        ///< min over radii of min_norm / radius
  double origin_value = 0.0;     ///< |Z(0)|
  std::vector<Point> zeros;      ///< distinct numerical zeros in the ball
  bool isolated_at_origin = false;
};

ZeroSetReport zero_set_check(const HolomorphicFit& fit, double search_radius);

struct WeightEstimate {
  double c1 = 0.0, c2 = 0.0;
  Eigen::Matrix2cd jacobian = Eigen::Matrix2cd::Zero();
  double residual = 0.0;
  double max_imag = 0.0;
};

WeightEstimate estimate_weights(const HolomorphicFit& fit, double tol = 1e-8);

double weighted_homogeneity_check(const HermitianPolynomial& p, double c1, double c2, int trials,
                                  std::uint64_t seed = 7);

/// Points on {rho = r} along random rays, located by bisection.
std::vector<Point> sample_level_set(const HermitianPolynomial& p, double r, std::size_t count, std::uint64_t seed);

struct TransportReport {
  double r1 = 0.0, r2 = 0.0;
  std::vector<double> rates;
  std::vector<double> times;
  double max_landing_defect = 0.0;  ///< max |rho - r2| / r2
  double max_round_trip = 0.0;      ///< max |z_back - z| / max(1, |z|)
};

TransportReport level_transport(const HermitianPolynomial& p, double r1, double r2,
                                const std::vector<Point>& samples, const FlowConfig& cfg = {});

// ------------------------------------------------------------ Burns

struct BurnsOptions {
  std::size_t positivity_samples = 10'000;
  std::size_t ma_samples = 2'000;
  std::size_t growth_rays = 64;
  double ma_threshold = 1e-9;
  double min_D = 1e-6;
  std::uint64_t seed = 11;
};

struct BurnsVerdict {
  int k = 0;
  bool is_ma = false;
  double max_abs_normalized = 0.0;
  Point worst_point;
  std::size_t ma_samples = 0;
  bool bidegree_pure = false;
  std::vector<std::pair<int, int>> components;
  bool extreme_components_vanish = false;
  double growth_bound = 0.0;
  double min_sphere_value = 0.0;
  Point min_sphere_point;
  double min_log_levi_eigenvalue = 0.0;
  std::string verdict;
  bool violated = false;
};

BurnsVerdict burns_verify(const HermitianPolynomial& p, const BurnsOptions& opts = {});

nlohmann::json to_json(const LeafDiagnostics& d);
nlohmann::json to_json(const HolomorphicFit& f);
nlohmann::json to_json(const ZeroSetReport& r);
nlohmann::json to_json(const WeightEstimate& w);
nlohmann::json to_json(const TransportReport& r);
nlohmann::json to_json(const BurnsVerdict& v);

/// CSV with columns t,s,x1,y1,x2,y2,rho,u (reached nodes only).
std::string leaf_trace_csv(const LeafTrace& trace);

/// Uniform points on the sphere of radius r.
std::vector<Point> sphere_samples(std::size_t count, double r, std::uint64_t seed);

} // namespace mafoliate
