#include "bifrac/frft.hpp"

#include <cmath>
#include <vector>

namespace bifrac {

ReducedAngle reduce_angle(Real theta, int sign) {
  Real k = std::floor(theta / kPi);
  Real r = theta - k * kPi;
  if (r >= kPi) { // rounding at the seam
    r -= kPi;
    k += 1.0;
  }
  if (r < 0.0) {
    r += kPi;
    k -= 1.0;
  }
  const long parity = static_cast<long>(std::fmod(k, 2.0));
  const int s = (parity == 0) ? sign : -sign;
  return ReducedAngle{r, s};
}

Complex kernel_eval(Real x, Real y, Real theta) {
  const ReducedAngle r = reduce_angle(theta);
  if (std::abs(std::sin(r.theta)) < kEpsTheta)
    throw degenerate_angle_error(
        "kernel_eval: |sin theta| below delta-limit guard");
  const Real ys = r.sign * y;
  const Real c = std::cos(r.theta) / std::sin(r.theta);
  const Real s = std::sin(r.theta);
  const Complex pref = std::sqrt(Complex(1.0, c) / (2.0 * kPi));
  return pref * std::exp(Complex(0.0, -0.5 * (x * x + ys * ys) * c + x * ys / s));
}

Complex chirp_eval(Real beta, Real theta) {
  const ReducedAngle r = reduce_angle(theta);
  if (std::abs(std::cos(r.theta)) < kEpsTheta)
    throw degenerate_angle_error("chirp_eval: tan theta overflows the guard");
  const Real t = std::tan(r.theta);
  return std::sqrt(Complex(1.0, -t)) * std::exp(Complex(0.0, 0.5 * beta * beta * t));
}

CMat AxisOp::apply_rows(const CMat& m) const {
  switch (kind) {
  case Kind::Identity:
    return m;
  case Kind::Reflect:
    return m.colwise().reverse();
  case Kind::Dense:
  default:
    return matrix * m;
  }
}

namespace {

void require_resolution(const SampledAxis& in_axis, Real out_max, Real theta) {
  const Real L = in_axis.half_width();
  const Real k_kernel = L * std::abs(std::cos(theta) / std::sin(theta)) +
                        out_max / std::abs(std::sin(theta));
  const Real k_nyquist = kPi / in_axis.spacing();
  if (k_kernel > k_nyquist)
    throw window_too_small_error(
        "axis too coarse for the kernel oscillation (Nyquist " +
        std::to_string(k_nyquist) + " < required " + std::to_string(k_kernel) +
        ")");
}

} // namespace

AxisOp make_axis_op(const SampledAxis& out_axis, const SampledAxis& in_axis,
                    Real theta, int sign) {
  const ReducedAngle r = reduce_angle(theta, sign);
  AxisOp op;
  op.in_axis = in_axis;
  op.out_axis = out_axis;

  if (r.is_delta()) {
    // Delta(x, s y; 0) = delta(x - s y) selects f(s x);
    // Delta(x, s y; pi) = delta(x + s y) selects f(-s x).
    const int pick = r.is_delta_identity() ? r.sign : -r.sign;
    if (!(out_axis == in_axis))
      throw window_too_small_error(
          "delta-limit transform requires matching axes");
    if (pick == +1) {
      op.kind = AxisOp::Kind::Identity;
    } else {
      if (!in_axis.is_symmetric())
        throw window_too_small_error(
            "delta-limit reflection requires a symmetric axis");
      op.kind = AxisOp::Kind::Reflect;
    }
    return op;
  }

  require_resolution(in_axis, out_axis.half_width(), r.theta);

  op.kind = AxisOp::Kind::Dense;
  const Index m = out_axis.n_points, n = in_axis.n_points;
  const RVec w = in_axis.weights();
  const Real c = std::cos(r.theta) / std::sin(r.theta);
  const Real s = std::sin(r.theta);
  const Complex pref = std::sqrt(Complex(1.0, c) / (2.0 * kPi));
  op.matrix.resize(m, n);
  for (Index i = 0; i < m; ++i) {
    const Real x = out_axis[i];
    const Real phx = -0.5 * x * x * c;
    for (Index j = 0; j < n; ++j) {
      const Real y = Real(r.sign) * in_axis[j];
      op.matrix(i, j) =
          w(j) * pref * std::exp(Complex(0.0, phx - 0.5 * y * y * c + x * y / s));
    }
  }
  return op;
}

ComplexGrid1D frft_apply(const ComplexGrid1D& f, Real theta) {
  if (!f.axis.is_symmetric())
    throw window_too_small_error("frft_apply: axis must be symmetric");
  require_tail(f.values, 1e-8, "frft_apply");
  const AxisOp op = make_axis_op(f.axis, f.axis, theta);
  return ComplexGrid1D(f.axis, op.apply_rows(f.values));
}

std::vector<ComplexGrid1D> compose_test_battery(const SampledAxis& axis) {
  const RVec x = axis.points();
  std::vector<ComplexGrid1D> battery;
  auto push = [&](auto&& poly) {
    CVec v(axis.n_points);
    for (Index i = 0; i < axis.n_points; ++i)
      v(i) = poly(x(i)) * std::exp(-0.5 * x(i) * x(i));
    v /= std::sqrt(std::abs(
        (axis.weights().cast<Complex>().array() * v.array().abs2()).sum()));
    battery.emplace_back(axis, std::move(v));
  };
  push([](Real t) { return Complex(1.0, 0.0); });
  push([](Real t) { return Complex(t, 0.0); });
  push([](Real t) { return Complex(t * t - 1.0, 0.0); });
  push([](Real t) { return Complex(t * t * t, 0.2 * t); });
  push([](Real t) { return Complex(1.0 + t + t * t, 0.0); });
  return battery;
}

Real frft_compose_check(Real theta1, Real theta2, const SampledAxis& axis) {
  Real worst = 0.0;
  for (const ComplexGrid1D& f : compose_test_battery(axis)) {
    const ComplexGrid1D lhs = frft_apply(frft_apply(f, theta1), theta2);
    const ComplexGrid1D rhs = frft_apply(f, theta1 + theta2);
    worst = std::max(worst, (lhs.values - rhs.values).cwiseAbs().maxCoeff());
  }
  return worst;
}

ComplexGrid2D frft2_apply(const ComplexGrid2D& f, Real theta_axis1,
                          Real theta_axis2, int sign1, int sign2) {
  const AxisOp t1 = make_axis_op(f.axis1, f.axis1, theta_axis1, sign1);
  const AxisOp t2 = make_axis_op(f.axis2, f.axis2, theta_axis2, sign2);
  CMat b = t1.apply_rows(f.values);
  CMat g = t2.apply_rows(b.transpose()).transpose();
  return ComplexGrid2D(f.axis1, f.axis2, std::move(g));
}

ComplexGrid2D bifrac_transform(const ComplexGrid2D& f, Real theta1,
                               Real theta2) {
  // g(a, b) = sum_j Delta(a, -v_j; theta1) sum_l Delta(b, u_l; theta2) f(u_l, v_j)
  const AxisOp t1 = make_axis_op(f.axis1, f.axis2, theta1, -1);
  const AxisOp t2 = make_axis_op(f.axis2, f.axis1, theta2, +1);
  CMat b = t1.apply_rows(f.values.transpose()); // rows: a, cols: u
  CMat g = t2.apply_rows(b.transpose()).transpose();
  return ComplexGrid2D(f.axis1, f.axis2, std::move(g));
}

ComplexGrid2D bifrac_transform_inverse(const ComplexGrid2D& g, Real theta1,
                                       Real theta2) {
  // Derived from the kernel additivity law: applying the same wiring with
  // angles (pi - theta2, pi - theta1) undoes the forward transform.
  return bifrac_transform(g, kPi - theta2, kPi - theta1);
}

Index points_for_kernel(Real half_width, Real out_max, Real theta, Real k_f,
                        Real margin, Index floor_points, Index cap_points) {
  const ReducedAngle r = reduce_angle(theta);
  Index m = floor_points;
  if (!r.is_delta()) {
    const Real s = std::abs(std::sin(r.theta));
    const Real k = half_width * std::abs(std::cos(r.theta)) / s + out_max / s + k_f;
    m = static_cast<Index>(std::ceil(2.0 * half_width * k * margin / kPi)) + 1;
    m = std::max(m, floor_points);
  }
  if (m > cap_points)
    throw window_too_small_error(
        "points_for_kernel: demanded resolution exceeds cap (" +
        std::to_string(m) + " > " + std::to_string(cap_points) + ")");
  if (m % 2 == 0)
    ++m;
  return m;
}

} // namespace bifrac
