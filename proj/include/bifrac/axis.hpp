#pragma once

#include "bifrac/types.hpp"

namespace bifrac {

// Uniformly sampled closed interval [x_min, x_max] with n_points samples.
struct SampledAxis {
  Real x_min = 0.0;
  Real x_max = 0.0;
  Index n_points = 0;

  SampledAxis() = default;
  SampledAxis(Real lo, Real hi, Index n) : x_min(lo), x_max(hi), n_points(n) {
    if (n_points < 8)
      throw std::invalid_argument("SampledAxis: n_points must be >= 8");
    if (!(x_max > x_min))
      throw std::invalid_argument("SampledAxis: empty interval");
  }

  // Symmetric axis [-L, L]; odd point counts put 0 on the grid.
  static SampledAxis symmetric(Real half_width, Index n) {
    return SampledAxis(-half_width, half_width, n);
  }

  Real spacing() const { return (x_max - x_min) / Real(n_points - 1); }
  Real half_width() const { return std::max(std::abs(x_min), std::abs(x_max)); }
  bool is_symmetric() const {
    return std::abs(x_min + x_max) < 1e-12 * (std::abs(x_min) + 1.0);
  }
  Real operator[](Index i) const { return x_min + spacing() * Real(i); }

  RVec points() const {
    return RVec::LinSpaced(n_points, x_min, x_max);
  }
  // Trapezoid quadrature weights.
  RVec weights() const {
    RVec w = RVec::Constant(n_points, spacing());
    w(0) *= 0.5;
    w(n_points - 1) *= 0.5;
    return w;
  }
  bool operator==(const SampledAxis& o) const {
    return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
  }
};

struct ComplexGrid1D {
  SampledAxis axis;
  CVec values;

  ComplexGrid1D() = default;
  ComplexGrid1D(SampledAxis ax, CVec v) : axis(ax), values(std::move(v)) {
    if (values.size() != axis.n_points)
      throw std::invalid_argument("ComplexGrid1D: size mismatch");
  }
};

// Row index runs over axis1 (alpha), column index over axis2 (beta):
// values(i, j) = f(axis1[i], axis2[j]).
struct ComplexGrid2D {
  SampledAxis axis1;
  SampledAxis axis2;
  CMat values;

  ComplexGrid2D() = default;
  ComplexGrid2D(SampledAxis a1, SampledAxis a2, CMat v)
      : axis1(a1), axis2(a2), values(std::move(v)) {
    if (values.rows() != axis1.n_points || values.cols() != axis2.n_points)
      throw std::invalid_argument("ComplexGrid2D: shape mismatch");
  }

  bool same_axes(const ComplexGrid2D& o) const {
    return axis1 == o.axis1 && axis2 == o.axis2;
  }
};

// Relative max-norm of the outer `frac` band of a sampled function; the tail
// test accepts when this falls below `tol`.
Real tail_fraction(const CVec& values, Real frac = 0.1);
Real tail_fraction(const CMat& values, Real frac = 0.1);

inline void require_tail(const CVec& v, Real tol, const char* what) {
  if (tail_fraction(v) > tol)
    throw window_too_small_error(std::string(what) +
                                 ": window tail test failed");
}
inline void require_tail(const CMat& v, Real tol, const char* what) {
  if (tail_fraction(v) > tol)
    throw window_too_small_error(std::string(what) +
                                 ": window tail test failed");
}

// Trapezoid integral of a sampled 1D function.
inline Complex integrate(const ComplexGrid1D& f) {
  return (f.axis.weights().cast<Complex>().array() * f.values.array()).sum();
}

// Trapezoid integral over both axes.
inline Complex integrate(const ComplexGrid2D& f) {
  CVec row = f.values.transpose() * f.axis1.weights().cast<Complex>();
  return (f.axis2.weights().cast<Complex>().array() * row.array()).sum();
}

} // namespace bifrac
