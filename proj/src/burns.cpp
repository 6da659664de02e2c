#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mafoliate/errors.hpp"
#include "mafoliate/foliation.hpp"
#include "mafoliate/parallel.hpp"

namespace mafoliate {

namespace {

nlohmann::json point_json(const Point& q) { return {q.z1.real(), q.z1.imag(), q.z2.real(), q.z2.imag()}; }

/// Pattern search for the minimum of p on the unit sphere around `best`.
double refine_min_on_sphere(const HermitianPolynomial& p, Point& best) {
  double fbest = p.evaluate(best);
  for (double step = 0.05; step > 1e-10; step *= 0.5) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int k = 0; k < 8; ++k) {
        auto x = best.real_coords();
        x[k / 2] += (k % 2 == 0 ? step : -step);
        Point q = Point::from_real(x[0], x[1], x[2], x[3]);
        q = (1.0 / q.norm()) * q;
        const double fq = p.evaluate(q);
        if (fq < fbest) {
          fbest = fq;
          best = q;
          improved = true;
        }
      }
    }
  }
  return fbest;
}

} // namespace

BurnsVerdict burns_verify(const HermitianPolynomial& p, const BurnsOptions& opts) {
  const std::optional<int> deg = p.homogeneous_degree();
  if (!deg || *deg <= 0 || *deg % 2 != 0) {
    throw Error(ErrorKind::NotHomogeneous, "expected all terms of one even positive total degree 2k");
  }
  BurnsVerdict v;
  v.k = *deg / 2;

  // Positivity on the unit sphere.
  const std::vector<Point> sphere = sphere_samples(opts.positivity_samples, 1.0, opts.seed);
  std::size_t worst = 0;
  for (std::size_t i = 1; i < sphere.size(); ++i) {
    if (p.evaluate(sphere[i]) < p.evaluate(sphere[worst])) worst = i;
  }
  v.min_sphere_point = sphere.at(worst);
  v.min_sphere_value = refine_min_on_sphere(p, v.min_sphere_point);
  if (!(v.min_sphere_value > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "rho = " << v.min_sphere_value << " at " << point_json(v.min_sphere_point).dump();
    throw Error(ErrorKind::NotPositive, msg.str());
  }

  // Monge-Ampere statistics. Homogeneity lets the unit sphere stand in for
  // all of C^2 minus the origin.
  const Exhaustion ex(p);
  const std::vector<Point> ma_pts = sphere_samples(opts.ma_samples, 1.0, opts.seed + 1);
  std::vector<double> normalized(ma_pts.size(), 0.0);
  std::vector<char> used(ma_pts.size(), 0);
  parallel_for(ma_pts.size(), [&](std::size_t i) {
    const WirtingerJet jet = ex.jet(ma_pts[i]);
    if (jet.D <= opts.min_D) return;
    normalized[i] = ma_residual(jet).normalized;
    used[i] = 1;
  });
  for (std::size_t i = 0; i < ma_pts.size(); ++i) {
    if (!used[i]) continue;
    ++v.ma_samples;
    if (std::abs(normalized[i]) >= v.max_abs_normalized) {
      v.max_abs_normalized = std::abs(normalized[i]);
      v.worst_point = ma_pts[i];
    }
  }
  if (v.ma_samples == 0) throw Error(ErrorKind::DegenerateLevi, "no sample with D > min_D on the unit sphere");
  v.is_ma = v.max_abs_normalized < opts.ma_threshold;

  // Bidegree structure.
  const BidegreeProfile prof = bidegree_decompose(p);
  for (const auto& [lm, comp] : prof.components) v.components.push_back(lm);
  v.bidegree_pure = v.components.size() == 1 && v.components.front() == std::make_pair(v.k, v.k);
  v.extreme_components_vanish = !prof.components.count({0, 2 * v.k}) && !prof.components.count({2 * v.k, 0});

  // Ray growth |log rho(lambda z) - 2k log|lambda| - log rho(z)|.
  const std::vector<Point> rays = sphere_samples(opts.growth_rays, 1.0, opts.seed + 2);
  constexpr int kMagnitudes = 25;
  std::vector<double> ray_bound(rays.size(), 0.0);
  parallel_for(rays.size(), [&](std::size_t i) {
    const double base = std::log(p.evaluate(rays[i]));
    for (int m = 0; m < kMagnitudes; ++m) {
      const double mag = std::pow(10.0, -3.0 + 6.0 * m / (kMagnitudes - 1));
      const double phase = 2.0 * M_PI * static_cast<double>((i * 7 + static_cast<std::size_t>(m) * 3) % 16) / 16.0;
      const cd lambda = std::polar(mag, phase);
      const double dev = std::log(p.evaluate(lambda * rays[i])) - 2.0 * v.k * std::log(mag) - base;
      ray_bound[i] = std::max(ray_bound[i], std::abs(dev));
    }
  });
  v.growth_bound = *std::max_element(ray_bound.begin(), ray_bound.end());

  v.min_log_levi_eigenvalue = psh_min_eigen(p, sphere, PshTarget::LogRho).min_eigenvalue;

  if (!v.is_ma) {
    v.verdict = "theorem inapplicable, consistent";
  } else if (v.bidegree_pure) {
    v.verdict = "theorem confirmed";
  } else {
    v.verdict = "theorem violated";
    v.violated = true;
  }
  return v;
}

nlohmann::json to_json(const BurnsVerdict& v) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& [l, m] : v.components) comps.push_back({l, m});
  return {{"k", v.k},
          {"is_ma", v.is_ma},
          {"max_abs_normalized_residual", v.max_abs_normalized},
          {"worst_point", point_json(v.worst_point)},
          {"ma_samples", v.ma_samples},
          {"bidegree_pure", v.bidegree_pure},
          {"components", comps},
          {"extreme_components_vanish", v.extreme_components_vanish},
          {"growth_bound", v.growth_bound},
          {"min_sphere_value", v.min_sphere_value},
          {"min_sphere_point", point_json(v.min_sphere_point)},
          {"min_log_levi_eigenvalue", v.min_log_levi_eigenvalue},
          {"verdict", v.verdict},
          {"violated", v.violated}};
}

} // namespace mafoliate
