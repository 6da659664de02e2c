#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace mafoliate {

using cd = std::complex<double>;

/// A point of C^2 in holomorphic coordinates.
struct Point {
  cd z1{};
  cd z2{};

  static Point from_real(double x1, double y1, double x2, double y2) {
    return {cd{x1, y1}, cd{x2, y2}};
  }

  std::array<double, 4> real_coords() const { return {z1.real(), z1.imag(), z2.real(), z2.imag()}; }

  double norm() const { return std::sqrt(std::norm(z1) + std::norm(z2)); }

  bool finite() const {
    return std::isfinite(z1.real()) && std::isfinite(z1.imag()) && std::isfinite(z2.real()) &&
           std::isfinite(z2.imag());
  }

  friend Point operator+(const Point& p, const Point& q) { return {p.z1 + q.z1, p.z2 + q.z2}; }
  friend Point operator-(const Point& p, const Point& q) { return {p.z1 - q.z1, p.z2 - q.z2}; }
  friend Point operator*(cd s, const Point& p) { return {s * p.z1, s * p.z2}; }
  friend Point operator*(double s, const Point& p) { return {s * p.z1, s * p.z2}; }
};

/// Components of a (1,0) tangent vector V^1 d/dz1 + V^2 d/dz2 at a point.
using Vec2c = std::array<cd, 2>;

inline double norm2(const Vec2c& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

} // namespace mafoliate
