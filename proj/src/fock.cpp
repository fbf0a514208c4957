#include "bifrac/fock.hpp"

#include <cmath>

namespace bifrac {

Real level_tail(const CVec& amplitudes) {
  const Index n = amplitudes.size();
  const Index band = std::max<Index>(1, n / 10);
  const Real total = amplitudes.squaredNorm();
  if (total == 0.0)
    return 0.0;
  return amplitudes.tail(band).squaredNorm() / total;
}

Real level_tail_diag(const CMat& matrix) {
  const Index n = matrix.rows();
  const Index band = std::max<Index>(1, n / 10);
  const Real total = matrix.diagonal().cwiseAbs().sum();
  if (total == 0.0)
    return 0.0;
  return matrix.diagonal().tail(band).cwiseAbs().sum() / total;
}

void require_density_matrix(const FockOperator& rho) {
  const CMat& m = rho.matrix;
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("density matrix: not Hermitian");
  if (std::abs(m.trace() - Complex(1.0)) > 1e-10)
    throw std::invalid_argument("density matrix: trace != 1");
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw std::invalid_argument("density matrix: negative eigenvalue");
}

void require_state(const FockState& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("state: not normalized");
  if (level_tail(psi.amplitudes) > psi.space.cutoff_tol)
    throw cutoff_exceeded_error("state: level tail test failed");
}

LadderOps ladder_ops(const FockSpace& space) {
  const Index n = space.dim;
  CMat a = CMat::Zero(n, n);
  for (Index k = 0; k + 1 < n; ++k)
    a(k, k + 1) = std::sqrt(Real(k + 1));
  LadderOps ops{a, a.adjoint(), CMat(), CMat()};
  ops.x_hat = (ops.a + ops.a_dagger) / std::sqrt(2.0);
  ops.p_hat = (ops.a - ops.a_dagger) / (kI * std::sqrt(2.0));
  return ops;
}

DisplacementEngine::DisplacementEngine(const FockSpace& space) : space_(space) {
  const Index n = space.dim;
  CMat h = CMat::Zero(n, n);
  for (Index k = 0; k + 1 < n; ++k) {
    h(k, k + 1) = kI * std::sqrt(Real(k + 1));
    h(k + 1, k) = -kI * std::sqrt(Real(k + 1));
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  vectors_ = es.eigenvectors();
  lambdas_ = es.eigenvalues();
}

CMat DisplacementEngine::real_displacement(Real r) const {
  CVec phase(lambdas_.size());
  for (Index k = 0; k < lambdas_.size(); ++k)
    phase(k) = std::exp(kI * (r * lambdas_(k)));
  return vectors_ * phase.asDiagonal() * vectors_.adjoint();
}

CMat DisplacementEngine::displacement(Complex z) const {
  const Real r = std::abs(z);
  CMat d = real_displacement(r);
  if (r == 0.0)
    return d;
  const Real phi = std::arg(z);
  CVec rot(space_.dim);
  for (Index k = 0; k < space_.dim; ++k)
    rot(k) = std::exp(kI * (phi * Real(k)));
  return rot.asDiagonal() * d * rot.conjugate().asDiagonal();
}

FockOperator displacement(const FockSpace& space, Real alpha, Real beta) {
  DisplacementEngine engine(space);
  CMat d = engine.displacement(Complex(alpha, beta));
  if (level_tail(d.col(0)) > space.cutoff_tol)
    throw cutoff_exceeded_error("displacement: displaced vacuum fails tail test");
  return FockOperator(space, std::move(d));
}

FockOperator parity(const FockSpace& space) {
  CMat p = CMat::Zero(space.dim, space.dim);
  for (Index k = 0; k < space.dim; ++k)
    p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return FockOperator(space, std::move(p));
}

FockOperator parity_displaced(const FockSpace& space, Real alpha, Real beta) {
  DisplacementEngine engine(space);
  CMat half = engine.displacement(Complex(alpha / 2.0, beta / 2.0));
  if (level_tail(half.col(0)) > space.cutoff_tol)
    throw cutoff_exceeded_error("parity_displaced: tail test failed");
  return FockOperator(space,
                      half * parity(space).matrix * half.adjoint());
}

FockState vacuum_state(const FockSpace& space) {
  CVec v = CVec::Zero(space.dim);
  v(0) = 1.0;
  return FockState(space, std::move(v));
}

FockState coherent_state(const FockSpace& space, Real alpha, Real beta) {
  FockOperator d = displacement(space, alpha, beta);
  return FockState(space, d.matrix.col(0));
}

namespace {

// Fills t_n = sqrt(n!/(n+d)!) |z|^d exp(-x/2) L_n^{(d)}(x) for n < count.
// All values are bounded by 1 (they are moduli of unitary matrix elements),
// which keeps the forward recurrence stable.
void scaled_laguerre_diagonal(Index d, Real x, Real log_abs_z, Index count,
                              Real* out) {
  if (count == 0)
    return;
  const Real log_t0 =
      Real(d) * log_abs_z - 0.5 * x - 0.5 * std::lgamma(Real(d) + 1.0);
  Real t0 = std::exp(log_t0);
  out[0] = t0;
  if (count == 1)
    return;
  Real t1 = t0 * (Real(1 + d) - x) / std::sqrt(Real(1 + d));
  out[1] = t1;
  for (Index n = 1; n + 1 < count; ++n) {
    const Real nn = Real(n);
    const Real c1 = (2.0 * nn + 1.0 + Real(d) - x) *
                    std::sqrt((nn + 1.0) / (nn + 1.0 + Real(d)));
    const Real c2 = (nn + Real(d)) * std::sqrt((nn + 1.0) * nn /
                                               ((nn + 1.0 + Real(d)) * (nn + Real(d))));
    const Real t2 = (c1 * t1 - c2 * t0) / (nn + 1.0);
    out[n + 1] = t2;
    t0 = t1;
    t1 = t2;
  }
}

} // namespace

Complex displacement_element_ideal(Index m, Index n, Complex z) {
  if (m < n)
    return std::conj(displacement_element_ideal(n, m, -z));
  const Real r = std::abs(z);
  if (r == 0.0)
    return (m == n) ? Complex(1.0) : Complex(0.0);
  const Index d = m - n;
  std::vector<Real> diag(n + 1);
  scaled_laguerre_diagonal(d, r * r, std::log(r), n + 1, diag.data());
  return std::exp(kI * (Real(d) * std::arg(z))) * diag[n];
}

void displacement_matrix_ideal_into(CMat& out, Index dim, Complex z) {
  out.resize(dim, dim);
  const Real r = std::abs(z);
  if (r == 0.0) {
    out.setIdentity();
    return;
  }
  const Real x = r * r;
  const Real lr = std::log(r);
  const Real phi = std::arg(z);
  std::vector<Real> diag(dim);
  for (Index d = 0; d < dim; ++d) {
    scaled_laguerre_diagonal(d, x, lr, dim - d, diag.data());
    const Complex up = std::polar(1.0, Real(d) * phi);
    const Complex lo = (d % 2 == 0 ? 1.0 : -1.0) * std::conj(up);
    for (Index n = 0; n + d < dim; ++n) {
      out(n + d, n) = up * diag[n];
      if (d > 0)
        out(n, n + d) = lo * diag[n];
    }
  }
}

CMat displacement_matrix_ideal(Index dim, Complex z) {
  CMat out;
  displacement_matrix_ideal_into(out, dim, z);
  return out;
}

CVec coherent_column(Index dim, Complex z) {
  CVec c(dim);
  c(0) = std::exp(-0.5 * std::norm(z));
  for (Index m = 0; m + 1 < dim; ++m)
    c(m + 1) = c(m) * z / std::sqrt(Real(m + 1));
  return c;
}

Complex weyl_function(const FockOperator& rho, Real alpha, Real beta) {
  if (level_tail_diag(rho.matrix) > rho.space.cutoff_tol)
    throw cutoff_exceeded_error("weyl_function: operator tail test failed");
  const CMat d = displacement_matrix_ideal(rho.space.dim, Complex(alpha, beta));
  return (rho.matrix.transpose().cwiseProduct(d)).sum();
}

Real wigner_function(const FockOperator& rho, Real alpha, Real beta) {
  if (level_tail_diag(rho.matrix) > rho.space.cutoff_tol)
    throw cutoff_exceeded_error("wigner_function: operator tail test failed");
  CMat pi_ab = displacement_matrix_ideal(rho.space.dim, Complex(alpha, beta));
  for (Index n = 1; n < rho.space.dim; n += 2)
    pi_ab.col(n) *= -1.0;
  const Complex w = (rho.matrix.transpose().cwiseProduct(pi_ab)).sum();
  if (std::abs(w.imag()) > 1e-6)
    throw imaginary_residue_error("wigner_function: imaginary residue " +
                                  std::to_string(w.imag()));
  return w.real();
}

ComplexGrid2D weyl_grid(const FockOperator& theta_op, const SampledAxis& axis1,
                        const SampledAxis& axis2) {
  const Index dim = theta_op.space.dim;
  const CMat thT = theta_op.matrix.transpose();
  CMat vals(axis1.n_points, axis2.n_points);
  for (Index i = 0; i < axis1.n_points; ++i) {
    const Real a = axis1[i];
    for (Index j = 0; j < axis2.n_points; ++j) {
      const CMat d = displacement_matrix_ideal(dim, Complex(a, axis2[j]));
      vals(i, j) = thT.cwiseProduct(d).sum();
    }
  }
  return ComplexGrid2D(axis1, axis2, std::move(vals));
}

ComplexGrid2D weyl_grid_dyad(const CVec& bra, const CVec& ket,
                             const SampledAxis& axis1,
                             const SampledAxis& axis2) {
  const Index dim = bra.size();
  CMat vals(axis1.n_points, axis2.n_points);
  for (Index i = 0; i < axis1.n_points; ++i) {
    const Real a = axis1[i];
    for (Index j = 0; j < axis2.n_points; ++j) {
      const CMat d = displacement_matrix_ideal(dim, Complex(a, axis2[j]));
      vals(i, j) = bra.adjoint() * d * ket;
    }
  }
  return ComplexGrid2D(axis1, axis2, std::move(vals));
}

RMat hermite_functions(const RVec& x, Index count) {
  const Index m = x.size();
  RMat psi(m, count);
  const Real norm0 = std::pow(kPi, -0.25);
  for (Index i = 0; i < m; ++i)
    psi(i, 0) = norm0 * std::exp(-0.5 * x(i) * x(i));
  if (count > 1)
    psi.col(1) = std::sqrt(2.0) * x.cwiseProduct(psi.col(0));
  for (Index n = 1; n + 1 < count; ++n) {
    psi.col(n + 1) = std::sqrt(2.0 / Real(n + 1)) * x.cwiseProduct(psi.col(n)) -
                     std::sqrt(Real(n) / Real(n + 1)) * psi.col(n - 1);
  }
  return psi;
}

} // namespace bifrac
