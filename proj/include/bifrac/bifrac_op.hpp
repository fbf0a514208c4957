#pragma once

#include "bifrac/fock.hpp"
#include "bifrac/frame.hpp"
#include "bifrac/frft.hpp"

#include <optional>

namespace bifrac {

// Parameters of U(alpha, beta; theta1, theta2). Angles live in the reduced
// domain; fold() absorbs pi-shifts of raw angles into sign flips of the
// labels, U(a,b;t1+pi,t2) = U(-a,b;t1,t2) and U(a,b;t1,t2+pi) = U(a,-b;t1,t2).
struct BifracParams {
  Real alpha;
  Real beta;
  AnglePair angles;

  static BifracParams fold(Real alpha, Real beta, Real theta1_raw,
                           Real theta2_raw);
};

struct BifracBuildOptions {
  Real margin = 1.35;
  Index floor_points = 129;
  Index cap_points = 1537;
  bool check_unitarity = true;
  Real unitarity_tol = 1e-4;
  bool allow_base_hop = true; // fall back to the parity base near delta angles
};

struct BifracBuildInfo {
  int base = 0; // 0: displacement base (Eq.-(1) route), 1: displaced-parity base
  Index points1 = 0;
  Index points2 = 0;
  Real window1 = 0.0;
  Real window2 = 0.0;
  Real unitarity_defect = -1.0; // measured when check_unitarity is set
};

struct BifracOperator {
  BifracParams params;
  FockOperator op;
  BifracBuildInfo info;
};

// <m|U(alpha,beta;theta1,theta2)|n> by quadrature of the sampled Weyl matrix
// elements against the two fractional kernels (the double-integral route of
// the defining transform), with exact delta-limit contractions.
Complex bifrac_matrix_element(Index m, Index n, Real alpha, Real beta,
                              const AnglePair& angles, const FockSpace& space,
                              const BifracBuildOptions& options = {});

// Full N x N matrix of U(alpha,beta;theta1,theta2).
BifracOperator build_bifrac(Real alpha, Real beta, const AnglePair& angles,
                            const FockSpace& space,
                            const BifracBuildOptions& options = {});

// || (U^dag U - 1) restricted to the leading (N-trim) block ||_inf.
Real unitarity_defect(const CMat& u, Index trim);
inline Index interior_trim(Index dim) { return std::max<Index>(4, dim / 4); }

// Largest leading block on which the observed N-level slice of U can be
// expected unitary. U squeezes with tanh r = |sin(theta1-theta2)| and
// displaces by ~|alpha + i beta|, so column n spreads to ~ n e^{2r} levels
// plus the displacement shift; anything past the truncation is lost and
// deeper blocks carry physical leakage, not quadrature error.
Index feasible_unitary_block(Index dim, const AnglePair& angles,
                             Real label_mag = 0.0);

// U(alpha,beta;theta1,theta2)|0> without assembling the full matrix; the
// integrand columns are closed-form coherent vectors.
CVec bifrac_vacuum_column(Real alpha, Real beta, const AnglePair& angles,
                          const FockSpace& space,
                          const BifracBuildOptions& options = {});

// Vacuum columns for every point of a rectangular label grid, contracted in
// tensor order. Column q = s * beta_axis.n_points + t holds the state at
// (alpha_axis[s], beta_axis[t]).
CMat bifrac_vacuum_column_grid(const SampledAxis& alpha_axis,
                               const SampledAxis& beta_axis,
                               const AnglePair& angles, const FockSpace& space,
                               const BifracBuildOptions& options = {});

enum class MarginalAxis { Alpha, Beta, Both };

// Numerical marginal integrals of U over alpha and/or beta on the standard
// window; for single axes the operator still depends on the remaining
// coordinate, passed as `remaining_value`.
FockOperator marginal_u(const AnglePair& angles, MarginalAxis axis,
                        const FockSpace& space, Real remaining_value = 0.0,
                        const BifracBuildOptions& options = {});

// The closed single-axis forms built from the chirp kernel
// Delta(0, .; pi/2 - theta) instead of the numerical marginal integral.
FockOperator marginal_u_chirp(const AnglePair& angles, MarginalAxis axis,
                              const FockSpace& space, Real remaining_value = 0.0,
                              const BifracBuildOptions& options = {});

} // namespace bifrac
