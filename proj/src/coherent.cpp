#include "bifrac/coherent.hpp"

#include <cmath>

namespace bifrac {

CoherentFactory::CoherentFactory(const AnglePair& angles,
                                 const FockSpace& space,
                                 BifracBuildOptions options)
    : angles_(angles), space_(space), options_(std::move(options)) {}

BifracCoherent CoherentFactory::standard(Real alpha, Real beta) const {
  CVec psi = bifrac_vacuum_column(alpha, beta, angles_, space_, options_);
  return BifracCoherent{CoherentKind::Standard, alpha, beta, angles_,
                        FockState(space_, std::move(psi))};
}

const CMat& CoherentFactory::u00() {
  if (!u00_) {
    BifracOperator u = build_bifrac(0.0, 0.0, angles_, space_, options_);
    u00_ = std::make_unique<CMat>(std::move(u.op.matrix));
  }
  return *u00_;
}

BifracCoherent CoherentFactory::r_state(Real alpha, Real beta) {
  const CMat& u = u00();
  CVec psi = u * coherent_column(space_.dim, Complex(alpha, beta));
  return BifracCoherent{CoherentKind::R, alpha, beta, angles_,
                        FockState(space_, std::move(psi))};
}

CMat CoherentFactory::b_operator() {
  const CMat& u = u00();
  const LadderOps ops = ladder_ops(space_);
  return u * ops.a * u.adjoint();
}

BifracCoherent bifrac_coherent(Real alpha, Real beta, const AnglePair& angles,
                               const FockSpace& space,
                               const BifracBuildOptions& options) {
  return CoherentFactory(angles, space, options).standard(alpha, beta);
}

BifracCoherent r_coherent(Real alpha, Real beta, const AnglePair& angles,
                          const FockSpace& space,
                          const BifracBuildOptions& options) {
  return CoherentFactory(angles, space, options).r_state(alpha, beta);
}

void relate_labels(Real alpha, Real beta, const AnglePair& angles,
                   Real& alpha_mapped, Real& beta_mapped, Real& x_phase) {
  const Real t1 = angles.theta1(), t2 = angles.theta2();
  alpha_mapped = -beta * std::cos(t1) - alpha * std::sin(t1);
  beta_mapped = alpha * std::cos(t2) - beta * std::sin(t2);
  x_phase = 0.25 * (beta * beta - alpha * alpha) *
                (std::sin(2.0 * t2) - std::sin(2.0 * t1)) +
            alpha * beta * (std::cos(t1) * std::cos(t1) -
                            std::cos(t2) * std::cos(t2));
}

RelateResult relate_states(Real alpha, Real beta, const AnglePair& angles,
                           const FockSpace& space,
                           const BifracBuildOptions& options) {
  CoherentFactory factory(angles, space, options);
  Real am, bm, x;
  relate_labels(alpha, beta, angles, am, bm, x);
  RelateResult res{factory.r_state(alpha, beta), factory.standard(am, bm),
                   std::exp(kI * x), 0.0};
  res.rhs.state.amplitudes *= res.phase;
  res.difference =
      (res.lhs.state.amplitudes - res.rhs.state.amplitudes).cwiseAbs().maxCoeff();
  return res;
}

Complex overlap(const BifracCoherent& s1, const BifracCoherent& s2) {
  if (s1.angles != s2.angles)
    throw angle_mismatch_error("overlap: states at different angles");
  if (s1.kind != CoherentKind::Standard || s2.kind != CoherentKind::Standard)
    throw angle_mismatch_error("overlap: closed form holds for standard kind");
  return (s1.state.amplitudes.adjoint() * s2.state.amplitudes)(0, 0);
}

Complex overlap_closed_form(Real alpha, Real beta, Real alpha2, Real beta2,
                            const AnglePair& angles) {
  // Gaussian in the w labels times one pure-phase correction per state,
  // exp(+/- i Im(conj(b) w^2)); the phases follow from the label-map
  // relation between the two state kinds and vanish at equal angles.
  const PhasePoint pw = phase_point(alpha, beta, angles);
  const PhasePoint pv = phase_point(alpha2, beta2, angles);
  const Complex w = pw.w, v = pv.w, b = pw.b_factor;
  const Complex gauss =
      std::exp(-0.5 * std::norm(w) - 0.5 * std::norm(v) + std::conj(w) * v);
  const Real x_w = std::imag(std::conj(b) * w * w);
  const Real x_v = std::imag(std::conj(b) * v * v);
  return gauss * std::exp(kI * (x_w - x_v));
}

AnalyticityReport analyticity_check(const AnglePair& angles,
                                    const FockSpace& space,
                                    const std::vector<Complex>& w_samples,
                                    Real step,
                                    const BifracBuildOptions& options) {
  CoherentFactory factory(angles, space, options);
  const Complex b = phase_point(0.0, 0.0, angles).b_factor;

  auto state_at = [&](Complex w) {
    Real a, be;
    invert_label(w, angles, a, be);
    return factory.standard(a, be).state.amplitudes;
  };

  AnalyticityReport report{0.0, 0.0, 0.0};
  for (const Complex w0 : w_samples) {
    const CVec sxp = state_at(w0 + step);
    const CVec sxm = state_at(w0 - step);
    const CVec syp = state_at(w0 + kI * step);
    const CVec sym = state_at(w0 - kI * step);

    auto wirtinger_conj = [&](bool with_b) {
      auto g = [&](Complex w, const CVec& s) {
        Complex e = 0.5 * std::norm(w);
        if (with_b)
          e -= 0.5 * b * std::conj(w) * std::conj(w);
        return (std::exp(e) * s).eval();
      };
      const CVec dx = (g(w0 + step, sxp) - g(w0 - step, sxm)) / (2.0 * step);
      const CVec dy =
          (g(w0 + kI * step, syp) - g(w0 - kI * step, sym)) / (2.0 * step);
      return (0.5 * (dx + kI * dy)).eval();
    };

    report.residual = std::max(report.residual, wirtinger_conj(true).norm());
    report.residual_ablated =
        std::max(report.residual_ablated, wirtinger_conj(false).norm());
    const Complex e0 =
        0.5 * std::norm(w0) - 0.5 * b * std::conj(w0) * std::conj(w0);
    report.scale =
        std::max(report.scale, (std::exp(e0) * state_at(w0)).norm());
  }
  return report;
}

ResolutionResult resolution_of_identity(const AnglePair& angles,
                                        const FockSpace& space,
                                        const SampledAxis& window,
                                        CoherentKind kind,
                                        const BifracBuildOptions& options,
                                        Index interior_levels) {
  const Index n = space.dim;
  const RVec w = window.weights();
  CMat s_mat = CMat::Zero(n, n);

  if (kind == CoherentKind::Standard) {
    const CMat cols =
        bifrac_vacuum_column_grid(window, window, angles, space, options);
    for (Index s = 0; s < window.n_points; ++s)
      for (Index t = 0; t < window.n_points; ++t) {
        const auto psi = cols.col(s * window.n_points + t);
        s_mat.noalias() += (w(s) * w(t)) * (psi * psi.adjoint());
      }
  } else {
    CoherentFactory factory(angles, space, options);
    const CMat& u = factory.u00();
    for (Index s = 0; s < window.n_points; ++s)
      for (Index t = 0; t < window.n_points; ++t) {
        const CVec psi =
            u * coherent_column(n, Complex(window[s], window[t]));
        s_mat.noalias() += (w(s) * w(t)) * (psi * psi.adjoint());
      }
  }

  Index interior = interior_levels;
  if (interior <= 0)
    interior = (kind == CoherentKind::Standard)
                   ? static_cast<Index>(std::floor(0.8 * Real(n)))
                   : std::max<Index>(4, feasible_unitary_block(n, angles));
  const CMat block = s_mat.topLeftCorner(interior, interior);
  // least-squares fit of block = normalizer * identity
  const Real normalizer =
      block.squaredNorm() / std::max(1e-300, block.real().trace());
  CMat defect_m = block / normalizer;
  defect_m.diagonal().array() -= 1.0;
  return ResolutionResult{defect_m.cwiseAbs().maxCoeff(), normalizer, interior};
}

} // namespace bifrac
