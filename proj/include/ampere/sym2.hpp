#pragma once

#include <cmath>

#include "ampere/geometry.hpp"

namespace ampere {

/// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct Sym2 {
  double a11 = 0.0, a12 = 0.0, a22 = 0.0;

  double det() const { return a11 * a22 - a12 * a12; }
  double trace() const { return a11 + a22; }
  double min_eig() const {
    double m = 0.5 * (a11 + a22);
    double d = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    return m - d;
  }
  double max_eig() const {
    double m = 0.5 * (a11 + a22);
    double d = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    return m + d;
  }
  bool psd(double tol) const { return min_eig() >= -tol; }
  bool pd(double tol) const { return min_eig() > tol; }

  /// Cofactor matrix: det(A) * A^{-1} for invertible A, defined for all A.
  Sym2 cofactor() const { return {a22, -a12, a11}; }

  Vec2 apply(Vec2 v) const { return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y}; }
  double quad(Vec2 v) const { return a11 * v.x * v.x + 2.0 * a12 * v.x * v.y + a22 * v.y * v.y; }

  Sym2 inverse() const {
    double d = det();
    return {a22 / d, -a12 / d, a11 / d};
  }
};

inline Sym2 operator+(Sym2 a, Sym2 b) { return {a.a11 + b.a11, a.a12 + b.a12, a.a22 + b.a22}; }
inline Sym2 operator-(Sym2 a, Sym2 b) { return {a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22}; }
inline Sym2 operator*(double s, Sym2 a) { return {s * a.a11, s * a.a12, s * a.a22}; }

inline double trace_prod(Sym2 a, Sym2 b) {
  return a.a11 * b.a11 + 2.0 * a.a12 * b.a12 + a.a22 * b.a22;
}

}  // namespace ampere
