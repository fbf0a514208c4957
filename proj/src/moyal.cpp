#include "bifrac/moyal.hpp"

#include <cmath>

namespace bifrac {

namespace {

// A-grid back to the sampled Weyl function (prefactor divided out).
ComplexGrid2D weyl_from_a(const AFunction& a) {
  ComplexGrid2D w = bifrac_transform_inverse(a.grid, a.angles.theta1(),
                                             a.angles.theta2());
  w.values /= std::sqrt(a.angles.abs_cos_diff());
  return w;
}

} // namespace

FockOperator reconstruct_operator(const AFunction& a, const FockSpace& space,
                                  const MoyalOptions& options) {
  const Real cost = Real(a.grid.axis1.n_points) * Real(a.grid.axis2.n_points) *
                    Real(space.dim) * Real(space.dim);
  if (cost > options.cost_budget)
    throw budget_exceeded_error("reconstruct_operator: grid x N^2 = " +
                                std::to_string(cost) + " over budget");

  const ComplexGrid2D w = weyl_from_a(a);
  require_tail(w.values, 1e-6, "reconstruct_operator");

  const RVec wa = w.axis1.weights();
  const RVec wb = w.axis2.weights();
  CMat acc = CMat::Zero(space.dim, space.dim);
  CMat buf;
  for (Index i = 0; i < w.axis1.n_points; ++i) {
    for (Index j = 0; j < w.axis2.n_points; ++j) {
      const Complex c = wa(i) * wb(j) * w.values(i, j);
      if (std::abs(c) < 1e-16)
        continue;
      displacement_matrix_ideal_into(buf, space.dim,
                                     Complex(-w.axis1[i], -w.axis2[j]));
      acc.noalias() += c * buf;
    }
  }
  return FockOperator(space, acc / kPi);
}

Complex trace_product(const AFunction& a1, const AFunction& a2) {
  if (a1.angles != a2.angles)
    throw angle_mismatch_error("trace_product: angle pairs differ");
  if (!a1.grid.same_axes(a2.grid))
    throw angle_mismatch_error("trace_product: grids sampled differently");

  CMat a2_dag;
  if (a2.source && (*a2.source - a2.source->adjoint()).cwiseAbs().maxCoeff() >
                       1e-12 * (1.0 + a2.source->cwiseAbs().maxCoeff())) {
    // non-Hermitian source: A^dag(.|Theta) = conj A(.|Theta^dag)
    const FockSpace space(a2.source->rows());
    const FockOperator adj(space, a2.source->adjoint());
    a2_dag = a_function_operator(adj, a2.angles, a2.build_options).grid.values
                 .conjugate();
  } else {
    a2_dag = a2.grid.values.conjugate();
  }

  const RVec wa = a1.grid.axis1.weights();
  const RVec wb = a1.grid.axis2.weights();
  const CMat prod = a1.grid.values.cwiseProduct(a2_dag);
  const CVec partial = prod.transpose() * wa.cast<Complex>();
  const Complex total = (wb.cast<Complex>().array() * partial.array()).sum();
  return total / (kPi * a1.angles.abs_cos_diff());
}

AFunction star_product(const AFunction& a1, const AFunction& a2) {
  if (a1.angles != a2.angles)
    throw angle_mismatch_error("star_product: angle pairs differ");
  if (!a1.grid.same_axes(a2.grid))
    throw angle_mismatch_error("star_product: grids sampled differently");
  const SampledAxis& axa = a1.grid.axis1;
  const SampledAxis& axb = a1.grid.axis2;
  if (axa.n_points % 2 == 0 || axb.n_points % 2 == 0 || !axa.is_symmetric() ||
      !axb.is_symmetric())
    throw window_too_small_error(
        "star_product: needs symmetric odd-point grids (0 on the lattice)");

  const ComplexGrid2D w1 = weyl_from_a(a1);
  const ComplexGrid2D w2 = weyl_from_a(a2);
  require_tail(w1.values, 1e-6, "star_product (first factor)");
  require_tail(w2.values, 1e-6, "star_product (second factor)");

  const Index ma = axa.n_points, mb = axb.n_points;
  const Index i0 = (ma - 1) / 2, j0 = (mb - 1) / 2;
  const Real h2 = axa.spacing() * axb.spacing();
  const RVec ga = axa.points(); // gamma nodes
  const RVec lb = axb.points(); // lambda nodes

  // twisted convolution W12(a,b) = (1/pi) sum_z W1(z) W2(w-z) e^{i(lambda a - gamma b)}
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic,
                               Eigen::RowMajor>;
  const RowMat w1_rows = w1.values;
  RowMat w2_rev(ma, mb); // rows of W2 with reversed column order
  for (Index i = 0; i < ma; ++i)
    for (Index k = 0; k < mb; ++k)
      w2_rev(i, k) = w2.values(i, mb - 1 - k);

  CMat w12(ma, mb);
  CMat phase_g(ma, mb); // e^{-i gamma_i beta_t}
  for (Index i = 0; i < ma; ++i)
    for (Index t = 0; t < mb; ++t)
      phase_g(i, t) = std::polar(1.0, -ga(i) * lb(t));
  RowMat w1p(ma, mb);
  for (Index s = 0; s < ma; ++s) {
    // fold e^{i lambda_j alpha_s} into the first factor once per output row
    for (Index j = 0; j < mb; ++j) {
      const Complex ph = std::polar(1.0, lb(j) * ga(s));
      for (Index i = 0; i < ma; ++i)
        w1p(i, j) = w1_rows(i, j) * ph;
    }
    const Index ilo = std::max<Index>(0, s + i0 - (ma - 1));
    const Index ihi = std::min<Index>(ma - 1, s + i0);
    for (Index t = 0; t < mb; ++t) {
      // W2(i2, t + j0 - j) = w2_rev(i2, j + off)
      const Index off = mb - 1 - t - j0;
      const Index jlo = std::max<Index>(0, -off);
      const Index jhi = std::min<Index>(mb - 1, mb - 1 - off);
      const Index len = jhi - jlo + 1;
      Complex acc = 0.0;
      for (Index i = ilo; i <= ihi; ++i) {
        const Index i2 = s - i + i0;
        const auto seg1 = w1p.row(i).segment(jlo, len).array();
        const auto seg2 = w2_rev.row(i2).segment(jlo + off, len).array();
        acc += (seg1 * seg2).sum() * phase_g(i, t);
      }
      w12(s, t) = acc * h2 / kPi;
    }
  }

  ComplexGrid2D wgrid(axa, axb, std::move(w12));
  ComplexGrid2D out = bifrac_transform(wgrid, a1.angles.theta1(),
                                       a1.angles.theta2());
  out.values *= std::sqrt(a1.angles.abs_cos_diff());
  return AFunction{a1.rho_id + "*" + a2.rho_id, a1.angles, std::move(out), 1.0,
                   std::nullopt, a1.build_options};
}

} // namespace bifrac
