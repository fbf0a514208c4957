#pragma once

#include "bifrac/axis.hpp"
#include "bifrac/types.hpp"

namespace bifrac {

// Fractional Fourier kernel
//   Delta(x, y; theta) = [(1 + i cot theta)/(2 pi)]^(1/2)
//                        * exp[-i (x^2+y^2) cot(theta)/2 + i x y / sin(theta)]
// with the principal branch of the complex square root. Angles are reduced
// with Delta(x, y; theta + pi) = Delta(x, -y; theta), which is exact for the
// principal branch, and the additivity law
//   int dy Delta(x,y;t1) Delta(y,z;t2) = Delta(x,z;t1+t2)
// holds without residual phase anywhere off the delta limits (enforced by the
// property suite).
Complex kernel_eval(Real x, Real y, Real theta);

// The chirp left behind when one kernel argument is integrated out,
//   int dx Delta(x, beta; theta) = [1 - i tan theta]^(1/2) exp(i beta^2 tan(theta)/2)
//                                = sqrt(2 pi) Delta(0, beta; theta - pi/2).
Complex chirp_eval(Real beta, Real theta);

// Reduction of theta into [0, pi) plus the parity of the pi-shifts, i.e. the
// accumulated sign flip on the kernel's second argument.
struct ReducedAngle {
  Real theta;   // in [0, pi)
  int sign;     // +1 or -1
  bool is_delta_identity() const { return theta < kEpsTheta; }
  bool is_delta_reflect() const { return kPi - theta < kEpsTheta; }
  bool is_delta() const { return is_delta_identity() || is_delta_reflect(); }
};
ReducedAngle reduce_angle(Real theta, int sign = +1);

// One 1D fractional transform along an axis: either a dense kernel matrix
// with trapezoid weights folded in, or an exact delta-limit permutation.
struct AxisOp {
  enum class Kind { Dense, Identity, Reflect } kind = Kind::Identity;
  CMat matrix; // only for Dense
  SampledAxis in_axis;
  SampledAxis out_axis;

  CMat apply_rows(const CMat& m) const;
};

// Builds the operation g(x) = int Delta(x, s*y; theta) f(y) dy on the given
// axes. Throws window_too_small_error when the input axis cannot resolve the
// kernel oscillation over the output range.
AxisOp make_axis_op(const SampledAxis& out_axis, const SampledAxis& in_axis,
                    Real theta, int sign = +1);

// g(x) = int Delta(x, y; theta) f(y) dy by trapezoid quadrature; exact
// special-case paths at the delta limits. Requires a symmetric axis and a
// decayed tail.
ComplexGrid1D frft_apply(const ComplexGrid1D& f, Real theta);

// Max-norm additivity defect over a fixed battery of smooth test functions:
// || F_theta2 F_theta1 f - F_(theta1+theta2) f ||_inf.
Real frft_compose_check(Real theta1, Real theta2, const SampledAxis& axis);

// Separable 2D transform with both kernels acting in parallel,
//   g(x, y) = int du dv Delta(x, s1*u; theta1) Delta(y, s2*v; theta2) f(u, v),
// the structure of the groupoid maps. Kernels commute; axes keep their roles.
ComplexGrid2D frft2_apply(const ComplexGrid2D& f, Real theta_axis1,
                          Real theta_axis2, int sign1 = +1, int sign2 = +1);

// The axis-swapping wiring of the bifractional displacement integrals,
//   g(a, b) = int du dv Delta(b, u; theta2) Delta(a, -v; theta1) f(u, v),
// i.e. the double integral of Eq-(1) type with f sampled over (u, v).
// No prefactor is applied.
ComplexGrid2D bifrac_transform(const ComplexGrid2D& f, Real theta1, Real theta2);

// Exact inverse of bifrac_transform at the same angles (also prefactor-free).
ComplexGrid2D bifrac_transform_inverse(const ComplexGrid2D& g, Real theta1,
                                       Real theta2);

// Smallest odd point count resolving a kernel of angle theta on [-L, L] with
// output arguments up to |out_max| and intrinsic content wavenumber k_f.
Index points_for_kernel(Real half_width, Real out_max, Real theta, Real k_f,
                        Real margin = 1.35, Index floor_points = 129,
                        Index cap_points = 4097);

// Battery of smooth, window-respecting test functions used by compose checks.
std::vector<ComplexGrid1D> compose_test_battery(const SampledAxis& axis);

} // namespace bifrac
