#pragma once

#include <random>
#include <vector>

#include "mafoliate/point.hpp"
#include "mafoliate/polynomial.hpp"

namespace testing_support {

using mafoliate::cd;
using mafoliate::Point;

/// Gaussian points in C^2, reproducible from the seed.
inline std::vector<Point> random_points(std::size_t n, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(Point::from_real(g(rng), g(rng), g(rng), g(rng)));
  return out;
}

/// Rational unitary diag((3+4i)/5, 1) * [[3/5, 4/5], [-4/5, 3/5]].
inline std::array<std::array<mafoliate::ComplexRational, 2>, 2> rational_unitary() {
  using mafoliate::ComplexRational;
  const ComplexRational phase(mpq_class(3, 5), mpq_class(4, 5));
  const ComplexRational c(mpq_class(3, 5)), s(mpq_class(4, 5));
  return {{{phase * c, phase * s}, {-s, c}}};
}

inline Point apply_unitary(const std::array<std::array<mafoliate::ComplexRational, 2>, 2>& u, const Point& q) {
  return {u[0][0].to_complex() * q.z1 + u[0][1].to_complex() * q.z2,
          u[1][0].to_complex() * q.z1 + u[1][1].to_complex() * q.z2};
}

/// Order estimate from errors at steps h and h/2.
inline double observed_order(double err_h, double err_half) { return std::log2(err_h / err_half); }

} // namespace testing_support
