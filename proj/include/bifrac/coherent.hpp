#pragma once

#include "bifrac/bifrac_op.hpp"

#include <memory>
#include <vector>

namespace bifrac {

enum class CoherentKind { Standard, R };

struct BifracCoherent {
  CoherentKind kind;
  Real alpha;
  Real beta;
  AnglePair angles;
  FockState state;
};

// Builds the two kinds of bifractional coherent states at fixed angles. The
// standard kind is the vacuum column of U(alpha,beta); the R kind applies the
// single operator U(0,0) to ordinary coherent vectors, so the factory caches
// that matrix.
class CoherentFactory {
public:
  CoherentFactory(const AnglePair& angles, const FockSpace& space,
                  BifracBuildOptions options = {});

  BifracCoherent standard(Real alpha, Real beta) const;
  BifracCoherent r_state(Real alpha, Real beta);

  // U(0,0; theta1, theta2), built on first use.
  const CMat& u00();
  // b(theta1,theta2) = U(0,0) a U(0,0)^dag; R states are its eigenstates.
  CMat b_operator();

  const AnglePair& angles() const { return angles_; }
  const FockSpace& space() const { return space_; }

private:
  AnglePair angles_;
  FockSpace space_;
  BifracBuildOptions options_;
  std::unique_ptr<CMat> u00_;
};

BifracCoherent bifrac_coherent(Real alpha, Real beta, const AnglePair& angles,
                               const FockSpace& space,
                               const BifracBuildOptions& options = {});
BifracCoherent r_coherent(Real alpha, Real beta, const AnglePair& angles,
                          const FockSpace& space,
                          const BifracBuildOptions& options = {});

// Label map and phase of the relation between the two kinds:
// |a,b>_R = |map(a,b)> exp(iX).
void relate_labels(Real alpha, Real beta, const AnglePair& angles,
                   Real& alpha_mapped, Real& beta_mapped, Real& x_phase);

struct RelateResult {
  BifracCoherent lhs;  // R state at (alpha, beta)
  BifracCoherent rhs;  // standard state at the mapped labels, phase applied
  Complex phase;       // exp(iX)
  Real difference;     // max-abs amplitude difference
};
RelateResult relate_states(Real alpha, Real beta, const AnglePair& angles,
                           const FockSpace& space,
                           const BifracBuildOptions& options = {});

// Fock inner product <s1|s2>; both states must share angles and be standard.
Complex overlap(const BifracCoherent& s1, const BifracCoherent& s2);

// Closed overlap form: Gaussian factor in the w labels times one
// quadratic-phase correction per state.
Complex overlap_closed_form(Real alpha, Real beta, Real alpha2, Real beta2,
                            const AnglePair& angles);

struct AnalyticityReport {
  Real residual;         // max_w || d/d(conj w) [exp(E) |w>] ||
  Real residual_ablated; // same with the b-term of E removed
  Real scale;            // max_w || exp(E) |w> ||
};

// Wirtinger-derivative probe of the analyticity factor exp(E(w|w*)),
// E = |w|^2/2 - b (w*)^2/2, by central differences in Re w and Im w.
AnalyticityReport analyticity_check(const AnglePair& angles,
                                    const FockSpace& space,
                                    const std::vector<Complex>& w_samples,
                                    Real step = 1e-3,
                                    const BifracBuildOptions& options = {});

struct ResolutionResult {
  Real defect;            // || S / normalizer - 1 ||_inf on the interior block
  Real fitted_normalizer; // least-squares constant c with S = c * 1
  Index interior;         // interior block size used
};

// Quadrature of integral |a,b><a,b| d a d b over the window against the
// identity, with the measure constant fitted and reported rather than
// assumed. interior_levels = 0 picks the default block: 80% of the levels
// for the standard kind (whose columns are exact quadratures of the
// untruncated states), the squeeze-feasible block for the R kind (whose
// states pass through the truncated U(0,0) matrix).
ResolutionResult resolution_of_identity(const AnglePair& angles,
                                        const FockSpace& space,
                                        const SampledAxis& window,
                                        CoherentKind kind,
                                        const BifracBuildOptions& options = {},
                                        Index interior_levels = 0);

} // namespace bifrac
