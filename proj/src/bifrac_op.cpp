#include "bifrac/bifrac_op.hpp"

#include <cmath>
#include <tuple>
#include <vector>

namespace bifrac {

BifracParams BifracParams::fold(Real alpha, Real beta, Real theta1_raw,
                                Real theta2_raw) {
  const ReducedAngle r1 = reduce_angle(theta1_raw);
  const ReducedAngle r2 = reduce_angle(theta2_raw);
  return BifracParams{Real(r1.sign) * alpha, Real(r2.sign) * beta,
                      AnglePair(r1.theta, r2.theta)};
}

Real unitarity_defect(const CMat& u, Index trim) {
  const Index k = u.rows() - trim;
  CMat g = u.adjoint() * u;
  g.diagonal().array() -= 1.0;
  return g.topLeftCorner(k, k).cwiseAbs().maxCoeff();
}

Index feasible_unitary_block(Index dim, const AnglePair& angles,
                             Real label_mag) {
  const Real t = std::min(std::abs(std::sin(angles.diff())), 0.999);
  const Real e2r = (1.0 + t) / (1.0 - t);
  const Real reach = Real(dim) / e2r; // desqueezed truncation horizon
  const Real room =
      reach - label_mag * label_mag - 2.0 * label_mag * std::sqrt(reach);
  return static_cast<Index>(std::floor(std::max(0.0, 0.5 * room)));
}

namespace {

// One quadrature direction of the double-integral contraction: kernel values
// times trapezoid weights at the nodes, or a single exact node at a delta
// limit.
struct AxisPlan {
  RVec nodes;
  CVec weights;
  Index size() const { return nodes.size(); }
};

AxisPlan make_plan(Real target, Real theta_minus_base, Real half_width,
                   Real k_intrinsic, const BifracBuildOptions& opt) {
  const ReducedAngle r = reduce_angle(theta_minus_base);
  AxisPlan plan;
  if (r.is_delta()) {
    const int pick = r.is_delta_identity() ? r.sign : -r.sign;
    plan.nodes = RVec::Constant(1, Real(pick) * target);
    plan.weights = CVec::Constant(1, 1.0);
    return plan;
  }
  const Index m =
      points_for_kernel(half_width, std::abs(target), r.theta, k_intrinsic,
                        opt.margin, opt.floor_points, opt.cap_points);
  const SampledAxis axis = SampledAxis::symmetric(half_width, m);
  plan.nodes = axis.points();
  plan.weights.resize(m);
  const RVec w = axis.weights();
  for (Index i = 0; i < m; ++i)
    plan.weights(i) = w(i) * kernel_eval(plan.nodes(i), Real(r.sign) * target,
                                         r.theta);
  return plan;
}

// Marginal-integration weights: the kernel integrated numerically over the
// output coordinate, sum_k w_k Delta(u_i, x_k; theta). The oscillatory
// truncation error of this 1D sum cancels against the decay of the
// contracted operator entries exactly as it does when the built operators
// are integrated one by one.
AxisPlan make_integrated_plan(Real theta, Real half_width, Real k_intrinsic,
                              const BifracBuildOptions& opt) {
  const ReducedAngle r = reduce_angle(theta);
  AxisPlan plan;
  const Index mu = points_for_kernel(half_width, half_width, r.theta,
                                     k_intrinsic, opt.margin, opt.floor_points,
                                     opt.cap_points);
  const SampledAxis u_axis = SampledAxis::symmetric(half_width, mu);
  plan.nodes = u_axis.points();
  plan.weights = CVec::Zero(mu);
  if (r.is_delta()) {
    // delta(u -+ x): integration over x sweeps the weight h across all nodes
    plan.weights = u_axis.weights().cast<Complex>();
    return plan;
  }
  const Index mx = points_for_kernel(half_width, half_width, r.theta, 0.0,
                                     opt.margin, opt.floor_points,
                                     opt.cap_points);
  const SampledAxis x_axis = SampledAxis::symmetric(half_width, mx);
  const RVec wx = x_axis.weights();
  const RVec wu = u_axis.weights();
  for (Index i = 0; i < mu; ++i) {
    Complex acc = 0.0;
    for (Index k = 0; k < mx; ++k)
      acc += wx(k) * kernel_eval(plan.nodes(i), Real(r.sign) * x_axis[k],
                                 r.theta);
    plan.weights(i) = wu(i) * acc;
  }
  return plan;
}

AxisPlan make_point_plan(Real target, Real theta_minus_base, Real half_width,
                         Real k_intrinsic, const BifracBuildOptions& opt) {
  return make_plan(target, theta_minus_base, half_width, k_intrinsic, opt);
}

AxisPlan make_chirp_plan(Real theta, Real half_width, Real k_intrinsic,
                         const BifracBuildOptions& opt) {
  // Delta(0, u; pi/2 - theta) weights; resolution demand matches a kernel of
  // angle pi/2 - theta evaluated at output 0.
  const ReducedAngle r = reduce_angle(kPi / 2.0 - theta);
  AxisPlan plan;
  if (r.is_delta()) {
    plan.nodes = RVec::Constant(1, 0.0);
    plan.weights = CVec::Constant(1, 1.0);
    return plan;
  }
  const Index m = points_for_kernel(half_width, 0.0, r.theta, k_intrinsic,
                                    opt.margin, opt.floor_points,
                                    opt.cap_points);
  const SampledAxis axis = SampledAxis::symmetric(half_width, m);
  plan.nodes = axis.points();
  plan.weights.resize(m);
  const RVec w = axis.weights();
  for (Index i = 0; i < m; ++i)
    plan.weights(i) = w(i) * chirp_eval(plan.nodes(i), theta);
  return plan;
}

// sum_ij w1_i w2_j U_base(u_i, v_j), with U_base(u,v) = D(v,-u) for the
// displacement base and Pi(u,v) = D(u,v) diag((-1)^n) for the parity base.
CMat contract(const FockSpace& space, int base, const AxisPlan& p1,
              const AxisPlan& p2) {
  const Index n = space.dim;
  CMat acc = CMat::Zero(n, n);
  CMat buf(n, n);
  for (Index i = 0; i < p1.size(); ++i) {
    const Real u = p1.nodes(i);
    for (Index j = 0; j < p2.size(); ++j) {
      const Real v = p2.nodes(j);
      const Complex z = (base == 0) ? Complex(v, -u) : Complex(u, v);
      displacement_matrix_ideal_into(buf, n, z);
      acc.noalias() += (p1.weights(i) * p2.weights(j)) * buf;
    }
  }
  if (base == 1)
    for (Index c = 1; c < n; c += 2)
      acc.col(c) *= -1.0;
  return acc;
}

Complex contract_element(Index m, Index nn, int base, const AxisPlan& p1,
                         const AxisPlan& p2) {
  Complex acc = 0.0;
  for (Index i = 0; i < p1.size(); ++i) {
    const Real u = p1.nodes(i);
    for (Index j = 0; j < p2.size(); ++j) {
      const Real v = p2.nodes(j);
      const Complex z = (base == 0) ? Complex(v, -u) : Complex(u, v);
      Complex e = displacement_element_ideal(m, nn, z);
      acc += p1.weights(i) * p2.weights(j) * e;
    }
  }
  if (base == 1 && nn % 2 == 1)
    acc = -acc;
  return acc;
}

struct BasePlans {
  int base;
  AxisPlan p1;
  AxisPlan p2;
};

BasePlans plan_for_target(Real alpha, Real beta, const AnglePair& angles,
                          const FockSpace& space,
                          const BifracBuildOptions& opt) {
  const Real half_width = 2.0 * std::sqrt(Real(space.dim)) + 4.0;
  const Real k_f = 2.0 * std::sqrt(Real(space.dim));
  auto attempt = [&](int base) {
    const Real shift = (base == 0) ? 0.0 : kPi / 2.0;
    BasePlans plans{base,
                    make_plan(alpha, angles.theta1() - shift, half_width, k_f,
                              opt),
                    make_plan(beta, angles.theta2() - shift, half_width, k_f,
                              opt)};
    return plans;
  };
  try {
    return attempt(0);
  } catch (const window_too_small_error&) {
    if (!opt.allow_base_hop)
      throw;
    return attempt(1);
  }
}

} // namespace

Complex bifrac_matrix_element(Index m, Index n, Real alpha, Real beta,
                              const AnglePair& angles, const FockSpace& space,
                              const BifracBuildOptions& options) {
  const BasePlans plans = plan_for_target(alpha, beta, angles, space, options);
  return std::sqrt(angles.abs_cos_diff()) *
         contract_element(m, n, plans.base, plans.p1, plans.p2);
}

BifracOperator build_bifrac(Real alpha, Real beta, const AnglePair& angles,
                            const FockSpace& space,
                            const BifracBuildOptions& options) {
  const BasePlans plans = plan_for_target(alpha, beta, angles, space, options);
  CMat u = std::sqrt(angles.abs_cos_diff()) *
           contract(space, plans.base, plans.p1, plans.p2);
  BifracBuildInfo info;
  info.base = plans.base;
  info.points1 = plans.p1.size();
  info.points2 = plans.p2.size();
  info.window1 = plans.p1.nodes.size() > 1 ? plans.p1.nodes.cwiseAbs().maxCoeff()
                                           : 0.0;
  info.window2 = plans.p2.nodes.size() > 1 ? plans.p2.nodes.cwiseAbs().maxCoeff()
                                           : 0.0;
  if (options.check_unitarity) {
    const Index block =
        std::min(space.dim - interior_trim(space.dim),
                 feasible_unitary_block(space.dim, angles,
                                        std::hypot(alpha, beta)));
    if (block >= 6) {
      info.unitarity_defect = unitarity_defect(u, space.dim - block);
      if (info.unitarity_defect > options.unitarity_tol)
        throw unitarity_failure_error(
            "build_bifrac: unitarity defect " +
            std::to_string(info.unitarity_defect) + " on the leading " +
            std::to_string(block) + " block");
    }
  }
  return BifracOperator{BifracParams{alpha, beta, angles},
                        FockOperator(space, std::move(u)), info};
}

CVec bifrac_vacuum_column(Real alpha, Real beta, const AnglePair& angles,
                          const FockSpace& space,
                          const BifracBuildOptions& options) {
  const BasePlans plans = plan_for_target(alpha, beta, angles, space, options);
  const Index n = space.dim;
  CVec acc = CVec::Zero(n);
  for (Index i = 0; i < plans.p1.size(); ++i) {
    const Real u = plans.p1.nodes(i);
    CVec inner = CVec::Zero(n);
    for (Index j = 0; j < plans.p2.size(); ++j) {
      const Real v = plans.p2.nodes(j);
      // Pi(u,v)|0> = D(u+iv)|0>: the vacuum is parity even
      const Complex z = (plans.base == 0) ? Complex(v, -u) : Complex(u, v);
      inner += plans.p2.weights(j) * coherent_column(n, z);
    }
    acc += plans.p1.weights(i) * inner;
  }
  return std::sqrt(angles.abs_cos_diff()) * acc;
}

CMat bifrac_vacuum_column_grid(const SampledAxis& alpha_axis,
                               const SampledAxis& beta_axis,
                               const AnglePair& angles, const FockSpace& space,
                               const BifracBuildOptions& options) {
  const Index s_count = alpha_axis.n_points, t_count = beta_axis.n_points;
  const Index n = space.dim;
  const Real half_width = 2.0 * std::sqrt(Real(space.dim)) + 4.0;
  const Real k_f = 2.0 * std::sqrt(Real(space.dim));

  // Both quadrature directions must be dense for the batched contraction;
  // targets differ per grid point, so the kernel weights become matrices.
  auto plan_axes = [&](int base) {
    const Real shift = (base == 0) ? 0.0 : kPi / 2.0;
    const ReducedAngle r1 = reduce_angle(angles.theta1() - shift);
    const ReducedAngle r2 = reduce_angle(angles.theta2() - shift);
    if (r1.is_delta() || r2.is_delta())
      throw window_too_small_error("batched columns need dense kernels");
    const Real out1 = alpha_axis.half_width(), out2 = beta_axis.half_width();
    const Index m1 = points_for_kernel(half_width, out1, r1.theta, k_f,
                                       options.margin, options.floor_points,
                                       options.cap_points);
    const Index m2 = points_for_kernel(half_width, out2, r2.theta, k_f,
                                       options.margin, options.floor_points,
                                       options.cap_points);
    return std::tuple<ReducedAngle, ReducedAngle, Index, Index>(r1, r2, m1, m2);
  };

  int base = 0;
  ReducedAngle r1{}, r2{};
  Index m1 = 0, m2 = 0;
  try {
    std::tie(r1, r2, m1, m2) = plan_axes(0);
  } catch (const window_too_small_error&) {
    if (!options.allow_base_hop)
      throw;
    base = 1;
    std::tie(r1, r2, m1, m2) = plan_axes(1);
  }

  const SampledAxis u_axis = SampledAxis::symmetric(half_width, m1);
  const SampledAxis v_axis = SampledAxis::symmetric(half_width, m2);
  const RVec wu = u_axis.weights(), wv = v_axis.weights();

  CMat k1(s_count, m1);
  for (Index s = 0; s < s_count; ++s)
    for (Index i = 0; i < m1; ++i)
      k1(s, i) = wu(i) * kernel_eval(u_axis[i],
                                     Real(r1.sign) * alpha_axis[s], r1.theta);
  CMat k2(t_count, m2);
  for (Index t = 0; t < t_count; ++t)
    for (Index j = 0; j < m2; ++j)
      k2(t, j) = wv(j) * kernel_eval(v_axis[j],
                                     Real(r2.sign) * beta_axis[t], r2.theta);

  std::vector<CMat> e(t_count, CMat(n, m1));
  CMat ci(n, m2);
  for (Index i = 0; i < m1; ++i) {
    const Real u = u_axis[i];
    for (Index j = 0; j < m2; ++j) {
      const Real v = v_axis[j];
      const Complex z = (base == 0) ? Complex(v, -u) : Complex(u, v);
      ci.col(j) = coherent_column(n, z);
    }
    CMat di = ci * k2.transpose(); // N x T
    for (Index t = 0; t < t_count; ++t)
      e[t].col(i) = di.col(t);
  }

  const Real pref = std::sqrt(angles.abs_cos_diff());
  CMat out(n, s_count * t_count);
  for (Index t = 0; t < t_count; ++t) {
    CMat psi_t = pref * (e[t] * k1.transpose()); // N x S
    for (Index s = 0; s < s_count; ++s)
      out.col(s * t_count + t) = psi_t.col(s);
  }
  return out;
}

FockOperator marginal_u(const AnglePair& angles, MarginalAxis axis,
                        const FockSpace& space, Real remaining_value,
                        const BifracBuildOptions& options) {
  const Real half_width = 2.0 * std::sqrt(Real(space.dim)) + 4.0;
  const Real k_f = 2.0 * std::sqrt(Real(space.dim));
  AxisPlan p1, p2;
  if (axis == MarginalAxis::Alpha || axis == MarginalAxis::Both)
    p1 = make_integrated_plan(angles.theta1(), half_width, k_f, options);
  else
    p1 = make_point_plan(remaining_value, angles.theta1(), half_width, k_f,
                         options);
  if (axis == MarginalAxis::Beta || axis == MarginalAxis::Both)
    p2 = make_integrated_plan(angles.theta2(), half_width, k_f, options);
  else
    p2 = make_point_plan(remaining_value, angles.theta2(), half_width, k_f,
                         options);
  CMat u = std::sqrt(angles.abs_cos_diff()) * contract(space, 0, p1, p2);
  return FockOperator(space, std::move(u));
}

FockOperator marginal_u_chirp(const AnglePair& angles, MarginalAxis axis,
                              const FockSpace& space, Real remaining_value,
                              const BifracBuildOptions& options) {
  if (axis == MarginalAxis::Both)
    throw std::invalid_argument(
        "marginal_u_chirp: both-axis form is build_bifrac at the "
        "complementary angles");
  const Real half_width = 2.0 * std::sqrt(Real(space.dim)) + 4.0;
  const Real k_f = 2.0 * std::sqrt(Real(space.dim));
  AxisPlan p1, p2;
  if (axis == MarginalAxis::Alpha) {
    p1 = make_chirp_plan(angles.theta1(), half_width, k_f, options);
    p2 = make_point_plan(remaining_value, angles.theta2(), half_width, k_f,
                         options);
  } else {
    p1 = make_point_plan(remaining_value, angles.theta1(), half_width, k_f,
                         options);
    p2 = make_chirp_plan(angles.theta2(), half_width, k_f, options);
  }
  CMat u = std::sqrt(angles.abs_cos_diff()) * contract(space, 0, p1, p2);
  return FockOperator(space, std::move(u));
}

} // namespace bifrac
