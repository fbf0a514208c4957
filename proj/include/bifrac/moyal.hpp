#pragma once

#include "bifrac/quasiprob.hpp"

namespace bifrac {

struct MoyalOptions {
  // refuse reconstructions whose grid-point count times N^2 exceeds this
  Real cost_budget = 6.0e9;
};

// Inverts the defining transform of an operator A-function back to its Weyl
// function and synthesizes the operator from the displacement family,
// Theta = (1/pi) int W~(a,b) D(-a,-b) da db (the delta-collapsed content of
// the reconstruction integral over A^dag U).
FockOperator reconstruct_operator(const AFunction& a, const FockSpace& space,
                                  const MoyalOptions& options = {});

// Tr(Theta1 Theta2) = (1/(pi |cos|)) int A(.|Theta1) A^dag(.|Theta2).
// A^dag comes from the stored source when present (conj of the A-function of
// the adjoint); without a source the operator is assumed Hermitian.
Complex trace_product(const AFunction& a1, const AFunction& a2);

// A-function of the operator product via the collapsed star pipeline:
// inverse transforms to Weyl functions, one twisted convolution with phase
// exp[i(lambda alpha - gamma beta)], forward transform back.
AFunction star_product(const AFunction& a1, const AFunction& a2);

} // namespace bifrac
