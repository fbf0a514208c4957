#include "bifrac/frame.hpp"

#include <cmath>

namespace bifrac {

Real AnglePair::reduce_mod_pi(Real theta) {
  Real r = std::fmod(theta, kPi);
  if (r < 0.0)
    r += kPi;
  // fmod can land exactly on pi through rounding of negative inputs
  if (r >= kPi)
    r -= kPi;
  return r;
}

AnglePair::AnglePair(Real theta1, Real theta2, Real eps_cos)
    : theta1_(reduce_mod_pi(theta1)), theta2_(reduce_mod_pi(theta2)) {
  if (std::abs(std::cos(theta1_ - theta2_)) < eps_cos)
    throw excluded_angle_error(
        "AnglePair: |cos(theta1-theta2)| below excluded-lines guard");
}

FrameCoefficients frame_coefficients(const AnglePair& angles) {
  const Real cd = angles.cos_diff();
  return FrameCoefficients{std::cos(angles.theta2()) / cd,
                           std::sin(angles.theta2()) / cd,
                           -std::sin(angles.theta1()) / cd,
                           std::cos(angles.theta1()) / cd};
}

Real frame_distance(Real x, Real y, const AnglePair& angles) {
  Real d2 = x * x + y * y + 2.0 * x * y * std::sin(angles.diff());
  if (d2 < 0.0)
    d2 = 0.0; // positive semidefinite form; negatives are rounding
  return std::sqrt(d2);
}

PhasePoint phase_point(Real alpha, Real beta, const AnglePair& angles) {
  PhasePoint p;
  p.alpha = alpha;
  p.beta = beta;
  p.e1 = kI * std::exp(-kI * angles.theta1());
  p.e2 = kI * std::exp(-kI * angles.theta2());
  p.w = (alpha * p.e2 + kI * beta * p.e1) / angles.cos_diff();
  p.b_factor = 0.25 * (std::exp(-2.0 * kI * angles.theta1()) -
                       std::exp(-2.0 * kI * angles.theta2()));
  return p;
}

void invert_label(Complex w, const AnglePair& angles, Real& alpha, Real& beta) {
  // w = alpha (B + iA) - beta (D + iC) with real coefficients, so
  // [Re w; Im w] = [[B, -D], [A, -C]] [alpha; beta].
  const FrameCoefficients f = frame_coefficients(angles);
  const Real det = -f.b * f.c + f.a * f.d; // = 1/cos(theta1-theta2), nonzero
  alpha = (-f.c * w.real() + f.d * w.imag()) / det;
  beta = (-f.a * w.real() + f.b * w.imag()) / det;
}

} // namespace bifrac
