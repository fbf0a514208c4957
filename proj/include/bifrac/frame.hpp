#pragma once

#include "bifrac/types.hpp"

namespace bifrac {

// Validated angle pair (theta1, theta2) in [0,pi) x [0,pi) away from the
// excluded lines theta1 - theta2 = +/- pi/2, where the |cos|^(1/2) prefactor
// of the bifractional operators vanishes. Angles are reduced mod pi at
// construction; callers fold the corresponding sign flips into (alpha, beta).
class AnglePair {
public:
  AnglePair(Real theta1, Real theta2, Real eps_cos = kEpsCos);

  Real theta1() const { return theta1_; }
  Real theta2() const { return theta2_; }
  Real diff() const { return theta1_ - theta2_; }
  Real cos_diff() const { return std::cos(theta1_ - theta2_); }
  Real abs_cos_diff() const { return std::abs(std::cos(theta1_ - theta2_)); }

  bool operator==(const AnglePair& o) const {
    return theta1_ == o.theta1_ && theta2_ == o.theta2_;
  }
  bool operator!=(const AnglePair& o) const { return !(*this == o); }

  static Real reduce_mod_pi(Real theta);

private:
  Real theta1_;
  Real theta2_;
};

// Change-of-basis coefficients of the non-orthogonal (theta1, theta2) frame:
// x' = A x + B y, y' = C x + D y with Jacobian A D - B C = 1/cos(theta1-theta2).
struct FrameCoefficients {
  Real a;
  Real b;
  Real c;
  Real d;
};

FrameCoefficients frame_coefficients(const AnglePair& angles);

// Distance from the origin expressed in the non-orthogonal frame coordinates:
// d^2 = x^2 + y^2 + 2 x y sin(theta1 - theta2), clamped at tiny negative
// rounding residue.
Real frame_distance(Real x, Real y, const AnglePair& angles);

// A labelled phase-space point (alpha, beta) with its complex frame label
// w = (alpha e2 + i beta e1)/cos(theta1-theta2), the unit-modulus frame
// constants e1, e2 and the analyticity factor b.
struct PhasePoint {
  Real alpha;
  Real beta;
  Complex w;
  Complex e1;
  Complex e2;
  Complex b_factor;
};

PhasePoint phase_point(Real alpha, Real beta, const AnglePair& angles);

// Inverse of the label map: the (alpha, beta) whose phase_point label is w.
void invert_label(Complex w, const AnglePair& angles, Real& alpha, Real& beta);

} // namespace bifrac
