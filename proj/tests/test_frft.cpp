#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bifrac/frft.hpp"

#include <cmath>
#include <random>

using namespace bifrac;

namespace {

// Independent kernel evaluation in polar form with extended precision:
// no complex square root, prefactor magnitude and phase assembled from
// half-angle identities. arg(1 + i cot t) = pi/2 - t on (0, pi).
Complex kernel_polar_oracle(Real x, Real y, Real theta) {
  long double t = static_cast<long double>(theta);
  const long double k = std::floor(t / 3.141592653589793238462643383279503L);
  t -= k * 3.141592653589793238462643383279503L;
  const long double sign =
      (static_cast<long long>(k) % 2 == 0) ? 1.0L : -1.0L;
  const long double ys = sign * static_cast<long double>(y);
  const long double xs = static_cast<long double>(x);
  const long double s = std::sin(t);
  const long double c = std::cos(t) / s;
  const long double mag =
      1.0L / std::sqrt(2.0L * 3.141592653589793238462643383279503L *
                       std::abs(s));
  const long double phase0 =
      0.5L * (3.141592653589793238462643383279503L / 2.0L - t);
  const long double phase = phase0 - 0.5L * (xs * xs + ys * ys) * c + xs * ys / s;
  return Complex(static_cast<Real>(mag * std::cos(phase)),
                 static_cast<Real>(mag * std::sin(phase)));
}

ComplexGrid1D gaussian_mode(const SampledAxis& axis) {
  CVec v(axis.n_points);
  for (Index i = 0; i < axis.n_points; ++i)
    v(i) = std::pow(kPi, -0.25) * std::exp(-0.5 * axis[i] * axis[i]);
  return ComplexGrid1D(axis, std::move(v));
}

} // namespace

TEST_CASE("kernel at the quarter turn is the fourier kernel") {
  // Delta(x, y; pi/2) = exp(i x y)/sqrt(2 pi)
  for (Real x : {-1.5, 0.0, 0.4, 2.2})
    for (Real y : {-0.3, 1.0, 1.9}) {
      const Complex want =
          std::exp(Complex(0.0, x * y)) / std::sqrt(2.0 * kPi);
      CHECK(std::abs(kernel_eval(x, y, kPi / 2) - want) < 1e-14);
    }
}

TEST_CASE("kernel symmetry in its arguments") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<Real> u(-3.0, 3.0);
  std::uniform_real_distribution<Real> a(0.2, kPi - 0.2);
  for (int k = 0; k < 300; ++k) {
    const Real x = u(rng), y = u(rng), t = a(rng);
    CHECK(std::abs(kernel_eval(x, y, t) - kernel_eval(y, x, t)) < 1e-13);
  }
}

TEST_CASE("kernel against the extended-precision polar oracle") {
  CHECK(std::abs(kernel_eval(1.0, 0.5, kPi / 4) -
                 kernel_polar_oracle(1.0, 0.5, kPi / 4)) < 1e-14);
  std::mt19937 rng(9);
  std::uniform_real_distribution<Real> u(-4.0, 4.0);
  std::uniform_real_distribution<Real> a(0.05, kPi - 0.05);
  for (int k = 0; k < 500; ++k) {
    const Real x = u(rng), y = u(rng), t = a(rng) + kPi * Real(k % 3 - 1);
    CHECK(std::abs(kernel_eval(x, y, t) - kernel_polar_oracle(x, y, t)) <
          2e-12);
  }
}

TEST_CASE("kernel degenerate-angle guard") {
  CHECK_THROWS_AS(kernel_eval(1.0, 1.0, 0.0), degenerate_angle_error);
  CHECK_THROWS_AS(kernel_eval(1.0, 1.0, kPi), degenerate_angle_error);
  CHECK_THROWS_AS(kernel_eval(1.0, 1.0, 1e-8), degenerate_angle_error);
}

TEST_CASE("chirp values") {
  CHECK(std::abs(chirp_eval(1.7, 0.0) - Complex(1.0, 0.0)) < 1e-14);
  // multiprecision spot value at (2.0, pi/6):
  // sqrt(1 - i tan) * exp(i 2 tan(pi/6)), assembled in polar form
  {
    const long double t = std::tan(3.141592653589793238462643383279503L / 6.0L);
    const long double mag = std::sqrt(std::sqrt(1.0L + t * t));
    const long double ph = -0.5L * std::atan(t) + 2.0L * t;
    const Complex want(static_cast<Real>(mag * std::cos(ph)),
                       static_cast<Real>(mag * std::sin(ph)));
    CHECK(std::abs(chirp_eval(2.0, kPi / 6) - want) < 1e-14);
  }
  // relation to the kernel zero slice
  for (Real t : {0.4, 1.0, 2.0, 2.9})
    for (Real b : {-1.5, 0.0, 0.8})
      CHECK(std::abs(chirp_eval(b, t) -
                     std::sqrt(2.0 * kPi) * kernel_eval(0.0, b, t - kPi / 2)) <
            1e-13);
  CHECK_THROWS_AS(chirp_eval(1.0, kPi / 2), degenerate_angle_error);
}

TEST_CASE("delta limits act exactly") {
  const SampledAxis axis = SampledAxis::symmetric(10.0, 512);
  for (const ComplexGrid1D& f : compose_test_battery(axis)) {
    const ComplexGrid1D id = frft_apply(f, 0.0);
    CHECK((id.values - f.values).cwiseAbs().maxCoeff() == 0.0);
    const ComplexGrid1D refl = frft_apply(f, kPi);
    CHECK((refl.values - f.values.reverse().eval()).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("gaussian vacuum mode is an eigenfunction of the quarter turn") {
  const SampledAxis axis = SampledAxis::symmetric(10.0, 512);
  const ComplexGrid1D f = gaussian_mode(axis);
  const ComplexGrid1D g = frft_apply(f, kPi / 2);
  // equal up to a unit-modulus constant; fix the constant at the center
  const Complex c = g.values((axis.n_points - 1) / 2) /
                    f.values((axis.n_points - 1) / 2);
  CHECK(std::abs(std::abs(c) - 1.0) < 1e-9);
  CHECK((g.values - c * f.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("composition battery") {
  const SampledAxis axis = SampledAxis::symmetric(10.0, 512);
  CHECK(frft_compose_check(kPi / 4, kPi / 4, axis) < 1e-6);
  CHECK(frft_compose_check(1.1, 0.0, axis) < 1e-12);
  // quarter turns compose to the reflection
  for (const ComplexGrid1D& f : compose_test_battery(axis)) {
    const ComplexGrid1D lhs = frft_apply(frft_apply(f, kPi / 2), kPi / 2);
    CHECK((lhs.values - f.values.reverse().eval()).cwiseAbs().maxCoeff() <
          1e-6);
  }
}

TEST_CASE("additivity over random nondegenerate pairs") {
  const SampledAxis axis = SampledAxis::symmetric(10.0, 512);
  std::mt19937 rng(33);
  std::uniform_real_distribution<Real> a(0.3, kPi - 0.3);
  int done = 0;
  while (done < 10) {
    const Real t1 = a(rng), t2 = a(rng);
    const ReducedAngle sum = reduce_angle(t1 + t2);
    if (!sum.is_delta() && (sum.theta < 0.3 || sum.theta > kPi - 0.3))
      continue;
    CHECK(frft_compose_check(t1, t2, axis) < 1e-5);
    ++done;
  }
}

TEST_CASE("unitarity and inverse on the grid") {
  const SampledAxis axis = SampledAxis::symmetric(10.0, 512);
  const RVec w = axis.weights();
  std::mt19937 rng(4);
  std::uniform_real_distribution<Real> a(0.3, kPi - 0.3);
  for (int k = 0; k < 5; ++k) {
    const Real theta = a(rng);
    for (const ComplexGrid1D& f : compose_test_battery(axis)) {
      const ComplexGrid1D g = frft_apply(f, theta);
      const Real n0 = std::sqrt((w.array() * f.values.array().abs2()).sum());
      const Real n1 = std::sqrt((w.array() * g.values.array().abs2()).sum());
      CHECK(std::abs(n1 - n0) < 1e-6 * n0);
      const ComplexGrid1D back = frft_apply(g, -theta);
      CHECK((back.values - f.values).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("guards: tails and resolution") {
  const SampledAxis axis = SampledAxis::symmetric(3.0, 64);
  CVec wide(axis.n_points);
  for (Index i = 0; i < axis.n_points; ++i)
    wide(i) = std::exp(-0.05 * axis[i] * axis[i]); // fat tails
  CHECK_THROWS_AS(frft_apply(ComplexGrid1D(axis, wide), kPi / 3),
                  window_too_small_error);

  // steep chirp on a coarse grid: kernel oscillation beyond Nyquist
  const SampledAxis coarse = SampledAxis::symmetric(8.0, 64);
  CVec narrow(coarse.n_points);
  for (Index i = 0; i < coarse.n_points; ++i)
    narrow(i) = std::exp(-2.0 * coarse[i] * coarse[i]);
  CHECK_THROWS_AS(frft_apply(ComplexGrid1D(coarse, narrow), 0.05),
                  window_too_small_error);
}

TEST_CASE("parallel 2d transform") {
  const SampledAxis axis = SampledAxis::symmetric(8.0, 161);
  CMat v(axis.n_points, axis.n_points);
  for (Index i = 0; i < axis.n_points; ++i)
    for (Index j = 0; j < axis.n_points; ++j)
      v(i, j) = (1.0 + 0.5 * axis[i]) *
                std::exp(-0.5 * (axis[i] * axis[i] + axis[j] * axis[j]));
  const ComplexGrid2D f(axis, axis, v);

  SUBCASE("zero angles with plus signs act as the identity") {
    const ComplexGrid2D g = frft2_apply(f, 0.0, 0.0);
    CHECK((g.values - f.values).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("two-step composition equals the direct transform") {
    const Real t1 = 0.7, t2 = 1.2, p1 = 1.6, p2 = 1.9;
    const ComplexGrid2D via =
        frft2_apply(frft2_apply(f, t1, t2), p1 - t1, p2 - t2);
    const ComplexGrid2D direct = frft2_apply(f, p1, p2);
    CHECK((via.values - direct.values).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("bifrac wiring against a direct 2d quadrature oracle") {
  // coarse grid keeps the brute-force double sum affordable
  const SampledAxis axis = SampledAxis::symmetric(7.0, 57);
  CMat v(axis.n_points, axis.n_points);
  for (Index i = 0; i < axis.n_points; ++i)
    for (Index j = 0; j < axis.n_points; ++j)
      v(i, j) = std::exp(-0.5 * (axis[i] * axis[i] + axis[j] * axis[j])) *
                Complex(1.0, 0.3 * axis[j]);
  const ComplexGrid2D f(axis, axis, v);
  const ComplexGrid2D g = bifrac_transform(f, kPi / 2, kPi / 2);

  const RVec w = axis.weights();
  for (Index a : {Index(10), Index(28), Index(41)}) {
    for (Index b : {Index(17), Index(28)}) {
      Complex acc = 0.0;
      for (Index i = 0; i < axis.n_points; ++i)
        for (Index j = 0; j < axis.n_points; ++j)
          acc += w(i) * w(j) *
                 std::exp(Complex(0.0, axis[b] * axis[i] - axis[a] * axis[j])) /
                 (2.0 * kPi) * f.values(i, j);
      CHECK(std::abs(g.values(a, b) - acc) < 1e-12);
    }
  }

  SUBCASE("inverse undoes the transform") {
    const ComplexGrid2D back = bifrac_transform_inverse(g, kPi / 2, kPi / 2);
    CHECK((back.values - f.values).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("inverse at generic angles") {
    const SampledAxis fine = SampledAxis::symmetric(8.0, 201);
    CMat vf(fine.n_points, fine.n_points);
    for (Index i = 0; i < fine.n_points; ++i)
      for (Index j = 0; j < fine.n_points; ++j)
        vf(i, j) = std::exp(-0.5 * (fine[i] * fine[i] + fine[j] * fine[j])) *
                   (1.0 + 0.4 * fine[i] * fine[j]);
    const ComplexGrid2D ff(fine, fine, vf);
    const ComplexGrid2D gg = bifrac_transform(ff, 1.1, 0.7);
    const ComplexGrid2D back = bifrac_transform_inverse(gg, 1.1, 0.7);
    CHECK((back.values - ff.values).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("points_for_kernel sizing") {
  CHECK(points_for_kernel(8.0, 0.0, kPi / 2, 0.0) == 129); // floor
  const Index m = points_for_kernel(8.0, 8.0, kPi / 3, 10.0);
  CHECK(m % 2 == 1);
  CHECK(m > 129);
  CHECK_THROWS_AS(points_for_kernel(15.0, 15.0, 0.01, 10.0, 1.35, 129, 1537),
                  window_too_small_error);
}
