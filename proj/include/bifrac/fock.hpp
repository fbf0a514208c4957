#pragma once

#include "bifrac/axis.hpp"
#include "bifrac/types.hpp"

namespace bifrac {

// An N-level truncated Fock space. All operators are dense N x N complex
// matrices; tail-population guards police the truncation.
struct FockSpace {
  Index dim;
  Real cutoff_tol;

  explicit FockSpace(Index n, Real tol = kCutoffTol) : dim(n), cutoff_tol(tol) {
    if (dim < 8)
      throw std::invalid_argument("FockSpace: dim must be >= 8");
  }
  bool operator==(const FockSpace& o) const { return dim == o.dim; }
};

struct FockOperator {
  FockSpace space;
  CMat matrix;

  FockOperator(FockSpace s, CMat m) : space(s), matrix(std::move(m)) {
    if (matrix.rows() != space.dim || matrix.cols() != space.dim)
      throw std::invalid_argument("FockOperator: shape mismatch");
  }
};

struct FockState {
  FockSpace space;
  CVec amplitudes;

  FockState(FockSpace s, CVec v) : space(s), amplitudes(std::move(v)) {
    if (amplitudes.size() != space.dim)
      throw std::invalid_argument("FockState: size mismatch");
  }
  Real norm() const { return amplitudes.norm(); }
};

// Fraction of state population in the top 10% of levels.
Real level_tail(const CVec& amplitudes);
// Same for the diagonal of an operator (density-matrix tail mass).
Real level_tail_diag(const CMat& matrix);

void require_density_matrix(const FockOperator& rho);
void require_state(const FockState& psi);

struct LadderOps {
  CMat a;
  CMat a_dagger;
  CMat x_hat;
  CMat p_hat;
};

// a|n> = sqrt(n)|n-1>, x = (a+a^dag)/sqrt(2), p = (a-a^dag)/(i sqrt(2));
// [x,p] = i on the interior block.
LadderOps ladder_ops(const FockSpace& space);

// Displacement operators D(alpha,beta) = exp(i sqrt2 beta x - i sqrt2 alpha p)
// = exp(z a^dag - z* a), z = alpha + i beta, as exact exponentials of the
// truncated generator (eigendecomposition of the Hermitian generator conjugated
// by number-phase rotations, so the result is exactly unitary).
class DisplacementEngine {
public:
  explicit DisplacementEngine(const FockSpace& space);

  const FockSpace& space() const { return space_; }
  // exp(r (a^dag - a)) for real r.
  CMat real_displacement(Real r) const;
  // D(z) for arbitrary complex z.
  CMat displacement(Complex z) const;

private:
  FockSpace space_;
  CMat vectors_;  // eigenvectors of i(a - a^dag)
  RVec lambdas_;  // its eigenvalues
};

FockOperator displacement(const FockSpace& space, Real alpha, Real beta);
FockOperator parity(const FockSpace& space); // diag((-1)^n)
// Pi(alpha,beta) = D(alpha/2,beta/2) Pi(0,0) D(alpha/2,beta/2)^dag.
FockOperator parity_displaced(const FockSpace& space, Real alpha, Real beta);
FockState vacuum_state(const FockSpace& space);
// D(alpha,beta)|0>, eigenstate of a with eigenvalue alpha + i beta.
FockState coherent_state(const FockSpace& space, Real alpha, Real beta);

// Matrix elements of the untruncated displacement operator observed on the
// N-level block, via the number-basis closed form (stable Laguerre
// recurrences). These stay faithful for |z| far beyond what the truncated
// exponential can represent, which is what the phase-space quadratures need.
Complex displacement_element_ideal(Index m, Index n, Complex z);
CMat displacement_matrix_ideal(Index dim, Complex z);
void displacement_matrix_ideal_into(CMat& out, Index dim, Complex z);
// <m|D(z)|0> = exp(-|z|^2/2) z^m / sqrt(m!).
CVec coherent_column(Index dim, Complex z);

// Weyl function W~(alpha,beta|rho) = Tr[rho D(alpha,beta)] and Wigner function
// W(alpha,beta|rho) = Tr[rho Pi(alpha,beta)], evaluated against the ideal
// displacement elements.
Complex weyl_function(const FockOperator& rho, Real alpha, Real beta);
Real wigner_function(const FockOperator& rho, Real alpha, Real beta);

// Tr[Theta D(z)] tabulated over a 2D window (rows: alpha axis, cols: beta axis).
ComplexGrid2D weyl_grid(const FockOperator& theta_op, const SampledAxis& axis1,
                        const SampledAxis& axis2);
// <bra| D(z) |ket> tabulated over the window (the Weyl grid of |ket><bra|).
ComplexGrid2D weyl_grid_dyad(const CVec& bra, const CVec& ket,
                             const SampledAxis& axis1, const SampledAxis& axis2);

// Hermite functions psi_n(x), n < count, sampled on x: result(i, n) = psi_n(x_i).
RMat hermite_functions(const RVec& x, Index count);

} // namespace bifrac
