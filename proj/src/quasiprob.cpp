#include "bifrac/quasiprob.hpp"

#include <cmath>

namespace bifrac {

namespace {

// Effective excitation cutoff: smallest K whose complement block is
// negligible. Keeps the ideal-element tabulation and the sizing wavenumbers
// tied to the operator content instead of the full truncation.
Index effective_levels(const CMat& m) {
  const Real scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0)
    return 1;
  Index k = m.rows();
  while (k > 1) {
    const Real outside = std::max(m.row(k - 1).cwiseAbs().maxCoeff(),
                                  m.col(k - 1).cwiseAbs().maxCoeff());
    if (outside > 1e-13 * scale)
      break;
    --k;
  }
  return k;
}

Real kernel_badness(Real delta) {
  const ReducedAngle r = reduce_angle(delta);
  if (r.is_delta())
    return 0.0;
  return (std::abs(std::cos(r.theta)) + 1.0) / std::abs(std::sin(r.theta));
}

CMat tabulate_weyl(const CMat& block, const SampledAxis& a1,
                   const SampledAxis& a2, bool relabeled) {
  // relabeled: A(alpha,beta;0,0) = W~(beta,-alpha); else plain W~(a,b)
  const Index dim = block.rows();
  const CMat bt = block.transpose();
  CMat vals(a1.n_points, a2.n_points);
  CMat d;
  for (Index i = 0; i < a1.n_points; ++i) {
    for (Index j = 0; j < a2.n_points; ++j) {
      const Complex z = relabeled ? Complex(a2[j], -a1[i])
                                  : Complex(a1[i], a2[j]);
      displacement_matrix_ideal_into(d, dim, z);
      vals(i, j) = bt.cwiseProduct(d).sum();
    }
  }
  return vals;
}

} // namespace

AFunction a_function_operator(const FockOperator& theta_op,
                              const AnglePair& angles,
                              const AFunctionOptions& options,
                              const std::string& label) {
  const Index n_eff = effective_levels(theta_op.matrix);
  const CMat block = theta_op.matrix.topLeftCorner(n_eff, n_eff);
  const Real k_weyl = 2.0 * std::sqrt(Real(n_eff)) + 2.0;
  const Real k_wig = 4.0 * std::sqrt(Real(n_eff)) + 4.0;
  const SampledAxis out = SampledAxis::symmetric(options.window, options.points);

  // pick the base family with the mildest difference kernels
  int base;
  if (options.force_base >= 0) {
    base = options.force_base;
  } else {
    const Real cost0 = std::max(kernel_badness(angles.theta1()),
                                kernel_badness(angles.theta2()));
    const Real cost1 = std::max(kernel_badness(angles.theta1() - kPi / 2.0),
                                kernel_badness(angles.theta2() - kPi / 2.0));
    base = (cost1 < cost0) ? 1 : 0;
  }
  const Real shift = (base == 0) ? 0.0 : kPi / 2.0;
  const Real k_base = (base == 0) ? k_weyl : k_wig;

  auto input_axis = [&](Real delta) {
    const ReducedAngle r = reduce_angle(delta);
    if (r.is_delta())
      return out;
    Index m = points_for_kernel(options.window, options.window, r.theta, k_base,
                                options.margin, options.points,
                                options.cap_points);
    if (base == 1) {
      // the Wigner base itself is produced through Fourier kernels on the
      // same axes, which must also stay resolved
      const Index mf =
          points_for_kernel(options.window, options.window, kPi / 2.0, k_weyl,
                            options.margin, options.points, options.cap_points);
      m = std::max(m, mf);
    }
    return SampledAxis::symmetric(options.window, m);
  };

  const Real d1 = angles.theta1() - shift;
  const Real d2 = angles.theta2() - shift;
  const SampledAxis ax1 = input_axis(d1);
  const SampledAxis ax2 = input_axis(d2);

  CMat base_vals;
  if (base == 0) {
    base_vals = tabulate_weyl(block, ax1, ax2, true);
  } else {
    ComplexGrid2D weyl(ax1, ax2, tabulate_weyl(block, ax1, ax2, false));
    if (options.tail_check)
      require_tail(weyl.values, 1e-8, "a_function (Weyl window)");
    base_vals = bifrac_transform(weyl, kPi / 2.0, kPi / 2.0).values;
  }
  if (options.tail_check)
    require_tail(base_vals, 1e-8, "a_function (base window)");

  const AxisOp op1 = make_axis_op(out, ax1, d1);
  const AxisOp op2 = make_axis_op(out, ax2, d2);
  CMat g = op1.apply_rows(base_vals);
  g = op2.apply_rows(g.transpose()).transpose();
  g *= std::sqrt(angles.abs_cos_diff());

  return AFunction{label,
                   angles,
                   ComplexGrid2D(out, out, std::move(g)),
                   1.0,
                   theta_op.matrix,
                   options};
}

AFunction a_function(const FockOperator& rho, const AnglePair& angles,
                     const AFunctionOptions& options) {
  require_density_matrix(rho);
  if (level_tail_diag(rho.matrix) > rho.space.cutoff_tol)
    throw cutoff_exceeded_error("a_function: density matrix tail test failed");
  AFunction a = a_function_operator(rho, angles, options, "rho");
  a.purity = purity(rho);
  return a;
}

Real purity(const FockOperator& rho) {
  return (rho.matrix * rho.matrix).trace().real();
}

Real marginal_a_squared_total(const AFunction& a) {
  const RVec w1 = a.grid.axis1.weights();
  const RVec w2 = a.grid.axis2.weights();
  return w1.dot((a.grid.values.cwiseAbs2() * w2).eval());
}

MarginalCurve marginal_a_squared(const AFunction& a, bool over_alpha) {
  if (over_alpha) {
    const RVec w1 = a.grid.axis1.weights();
    MarginalCurve c{a.grid.axis2, RVec()};
    c.values = a.grid.values.cwiseAbs2().transpose() * w1;
    return c;
  }
  const RVec w2 = a.grid.axis2.weights();
  MarginalCurve c{a.grid.axis1, RVec()};
  c.values = a.grid.values.cwiseAbs2() * w2;
  return c;
}

InterpolatingMoments interpolating_moments(const AFunction& a) {
  const RVec pa = a.grid.axis1.points();
  const RVec pb = a.grid.axis2.points();
  const RVec w1 = a.grid.axis1.weights();
  const RVec w2 = a.grid.axis2.weights();
  const RMat dens = a.grid.values.cwiseAbs2();
  const Real norm = kPi * a.purity;

  const RVec alpha_marg = dens * w2;  // function of alpha
  const RVec beta_marg = dens.transpose() * w1;

  auto moments_1d = [&](const RVec& marg, const RVec& pts, const RVec& w,
                        Real& mean, Real& delta) {
    const Real m1 = (w.array() * pts.array() * marg.array()).sum() / norm;
    const Real m2 =
        (w.array() * pts.array().square() * marg.array()).sum() / norm;
    mean = m1;
    Real bracket = m2 - m1 * m1;
    if (bracket < -1e-8)
      throw negative_variance_error(
          "interpolating_moments: variance bracket " + std::to_string(bracket));
    if (bracket < 0.0)
      bracket = 0.0;
    delta = std::sqrt(bracket);
  };

  InterpolatingMoments m{};
  moments_1d(alpha_marg, pa, w1, m.mean_alpha, m.delta_alpha);
  moments_1d(beta_marg, pb, w2, m.mean_beta, m.delta_beta);
  return m;
}

FockOperator cat_density(const CatState& spec, const FockSpace& space) {
  if (spec.p < 0.0 || spec.p > 1.0)
    throw std::invalid_argument("cat_density: p outside [0,1]");
  const CVec plus = coherent_state(space, spec.alpha0, spec.beta0).amplitudes;
  const CVec minus =
      coherent_state(space, -spec.alpha0, -spec.beta0).amplitudes;
  CMat rho = spec.p * (plus * plus.adjoint()) +
             (1.0 - spec.p) * (minus * minus.adjoint());
  // symmetrize away rounding so the density-matrix validators stay exact
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return FockOperator(space, std::move(rho));
}

std::vector<FigRow> figure_curves(FigureKind which, Index resolution,
                                  const FockSpace& space,
                                  const AFunctionOptions& options) {
  std::vector<FigRow> rows;
  rows.reserve(resolution);

  if (which == FigureKind::Fig2) {
    const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.5}, space);
    const AFunction a00 = a_function(rho, AnglePair(0.0, 0.0), options);
    const Real delta_beta = interpolating_moments(a00).delta_beta;
    for (Index k = 0; k < resolution; ++k) {
      const Real theta2 = kPi * Real(k) / Real(resolution);
      FigRow row{theta2, 0.0, delta_beta, 0.0, false};
      try {
        const AnglePair angles(kPi / 2.0, theta2);
        const AFunction a = a_function(rho, angles, options);
        row.delta_alpha = interpolating_moments(a).delta_alpha;
        row.product = row.delta_alpha * row.delta_beta;
      } catch (const excluded_angle_error&) {
        row.masked = true;
        row.delta_alpha = 0.0;
        row.delta_beta = 0.0;
        row.product = 0.0;
      }
      rows.push_back(row);
    }
    return rows;
  }

  const AnglePair angles(kPi / 4.0, kPi / 4.0);
  for (Index k = 0; k < resolution; ++k) {
    const Real p = (resolution == 1) ? 0.0 : Real(k) / Real(resolution - 1);
    const FockOperator rho = cat_density(CatState{2.0, 0.0, p}, space);
    const AFunction a = a_function(rho, angles, options);
    const AFunction a00 = a_function(rho, AnglePair(0.0, 0.0), options);
    FigRow row{p, interpolating_moments(a).delta_alpha,
               interpolating_moments(a00).delta_beta, 0.0, false};
    row.product = row.delta_alpha * row.delta_beta;
    rows.push_back(row);
  }
  return rows;
}

} // namespace bifrac
