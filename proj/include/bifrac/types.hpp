#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bifrac {

using Real = double;
using Complex = std::complex<Real>;

using CMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using CRowVec = Eigen::Matrix<Complex, 1, Eigen::Dynamic>;
using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using Index = Eigen::Index;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Guard thresholds shared across modules.
inline constexpr Real kEpsCos = 1e-6;    // excluded-lines guard on |cos(theta1-theta2)|
inline constexpr Real kEpsTheta = 1e-6;  // delta-limit guard on |sin theta|
inline constexpr Real kCutoffTol = 1e-8; // Fock tail-population guard

struct degenerate_angle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct excluded_angle_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct window_too_small_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct cutoff_exceeded_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct unitarity_failure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct not_composable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct angle_mismatch_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct imaginary_residue_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct convergence_failure_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct negative_variance_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct stencil_too_coarse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct budget_exceeded_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace bifrac
