#pragma once

#include "bifrac/fock.hpp"
#include "bifrac/frame.hpp"
#include "bifrac/frft.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bifrac {

// Sampled bifractional Wigner function A(alpha,beta;theta1,theta2|rho) on a
// square window; collapses to the relabelled Weyl function at angles (0,0)
// and to the Wigner function at (pi/2,pi/2).
struct AFunctionOptions {
  Real window = 13.0;
  Index points = 261;
  Real margin = 1.35;
  Index cap_points = 3073;
  int force_base = -1; // -1 auto, 0 Weyl base, 1 Wigner base
  bool tail_check = true;
};

struct AFunction {
  std::string rho_id;
  AnglePair angles;
  ComplexGrid2D grid;
  Real purity = 1.0;               // Tr rho^2 of the source
  std::optional<CMat> source;      // source operator, kept for dagger grids
  AFunctionOptions build_options;  // axes are derived from these
};

// Grid pipeline: tabulate the Weyl function, land on the nearest
// well-conditioned base family (Weyl relabel or Wigner transform), then apply
// the two parallel difference kernels with the |cos|^(1/2) prefactor.
AFunction a_function(const FockOperator& rho, const AnglePair& angles,
                     const AFunctionOptions& options = {});
// Same pipeline for arbitrary (non-density) operators.
AFunction a_function_operator(const FockOperator& theta_op,
                              const AnglePair& angles,
                              const AFunctionOptions& options = {},
                              const std::string& label = "operator");

struct MarginalCurve {
  SampledAxis axis;
  RVec values;
};

// Trapezoid integrals of |A|^2 over one or both coordinates.
Real marginal_a_squared_total(const AFunction& a);
MarginalCurve marginal_a_squared(const AFunction& a, bool over_alpha);

struct InterpolatingMoments {
  Real mean_alpha;
  Real mean_beta;
  Real delta_alpha;
  Real delta_beta;
};

// <<alpha^n>> = (1/(pi Tr rho^2)) int alpha^n |A|^2, delta = sqrt of the
// variance bracket; tiny negative brackets are clamped, larger ones raise
// negative_variance_error.
InterpolatingMoments interpolating_moments(const AFunction& a);

struct CatState {
  Real alpha0 = 2.0;
  Real beta0 = 0.0;
  Real p = 0.5;
};

// rho = p |a0,b0><a0,b0| + (1-p) |-a0,-b0><-a0,-b0|
FockOperator cat_density(const CatState& spec, const FockSpace& space);
Real purity(const FockOperator& rho);

enum class FigureKind { Fig2, Fig3 };

struct FigRow {
  Real x; // theta2 for fig2, p for fig3
  Real delta_alpha;
  Real delta_beta;
  Real product;
  bool masked;
};

// Fig. 2: delta_alpha(pi/2, theta2) * delta_beta(0,0) versus theta2 for the
// two-component cat; Fig. 3: delta_alpha(pi/4,pi/4) * delta_beta(0,0) versus
// the mixing weight p. Rows on the excluded band are masked.
std::vector<FigRow> figure_curves(FigureKind which, Index resolution,
                                  const FockSpace& space,
                                  const AFunctionOptions& options = {});

} // namespace bifrac
