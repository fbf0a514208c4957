#pragma once

#include "bifrac/coherent.hpp"

#include <map>

namespace bifrac {

// Berezin L symbols against the bifractional coherent states,
//   L(z, w*|Theta) = exp(|z|^2/2 + |w|^2/2 - z w*) <state(z*)|Theta|state(w*)>.
// States are quadrature builds, so the evaluator caches them by label.
class BerezinEvaluator {
public:
  BerezinEvaluator(const AnglePair& angles, const FockSpace& space,
                   BifracBuildOptions options = {});

  Complex l_symbol(const CMat& theta_op, Complex z, Complex w);
  const CVec& state_for_label(Complex label);

  const AnglePair& angles() const { return factory_.angles(); }

private:
  CoherentFactory factory_;
  std::map<std::pair<Real, Real>, CVec> cache_;
};

Complex l_symbol(const FockOperator& theta_op, Complex z, Complex w,
                 const AnglePair& angles,
                 const BifracBuildOptions& options = {});

struct SmoothingResult {
  ComplexGrid2D lhs; // Gaussian smoothing with the frame distance
  ComplexGrid2D rhs; // (1/2) exp(Laplacian/4K) series through `order`
  Real max_error;
  Index margin; // boundary cells excluded from the comparison
};

// Checks the smoothing lemma on a sampled F: the K-Gaussian integral with the
// interpolating distance against the truncated exponential of the
// bifractional Laplacian d2/da2 + d2/db2 - 2 sin(theta1-theta2) d2/dadb.
SmoothingResult smoothing_check(const ComplexGrid2D& f, Real k_gauss,
                                const AnglePair& angles, int order);

struct BerezinExpansion {
  Complex full;                  // Fock-oracle symbol of the product
  std::vector<Complex> terms;    // series terms 0..order
  std::vector<Complex> partials; // cumulative sums
  Real stencil_estimate;         // Richardson step sensitivity of term 1
};

// Product expansion: term k = (Laplacian_zeta/4)^k / k! applied to
// L(z,zeta*|Theta1) L(zeta,z*|Theta2) at zeta = z, derivatives by central
// finite differences with one Richardson halving.
//
// In the w-label plane the frame map cancels the sin(theta1-theta2)-weighted
// second derivatives exactly (the Gaussian of the overlap law is isotropic
// there), so the expansion operator is the plain d/dzeta d/dzeta*. Passing
// paper_sin_terms adds the printed +/- (i/2) sin d^2 corrections for
// comparison runs.
BerezinExpansion berezin_product(const FockOperator& theta1_op,
                                 const FockOperator& theta2_op, Complex z,
                                 const AnglePair& angles, int order,
                                 Real step = 1e-2,
                                 const BifracBuildOptions& options = {},
                                 bool paper_sin_terms = false);

} // namespace bifrac
