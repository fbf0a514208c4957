#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bifrac/moyal.hpp"

#include <cmath>
#include <random>

using namespace bifrac;

namespace {
const AnglePair kAngles(kPi / 3, kPi / 4);

// window/points pair that keeps both transform directions of the pipeline
// resolvable for operators confined to ~n_eff levels
AFunctionOptions star_options(const AnglePair& angles, Index n_eff,
                              Real window) {
  AFunctionOptions opt;
  opt.window = window;
  const Real k_f = 4.0 * std::sqrt(Real(n_eff)) + 4.0;
  Index m = 129;
  for (Real t : {angles.theta1(), angles.theta2(), kPi - angles.theta1(),
                 kPi - angles.theta2()}) {
    const ReducedAngle r = reduce_angle(t);
    if (!r.is_delta())
      m = std::max(m, points_for_kernel(window, window, r.theta, k_f));
  }
  opt.points = (m % 2 == 0) ? m + 1 : m;
  return opt;
}

CVec damped_state(Index dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<Real> g(0.0, 1.0);
  CVec v(dim);
  for (Index n = 0; n < dim; ++n)
    v(n) = Complex(g(rng), g(rng)) * std::exp(-1.3 * Real(n));
  return v / v.norm();
}
} // namespace

TEST_CASE("operator reconstruction from its a-function") {
  const FockSpace space(16);

  SUBCASE("vacuum projector at the wigner pair") {
    CMat p0 = CMat::Zero(space.dim, space.dim);
    p0(0, 0) = 1.0;
    const AFunctionOptions opt =
        star_options(AnglePair(kPi / 2, kPi / 2), 4, 9.0);
    const AFunction a = a_function_operator(FockOperator(space, p0),
                                            AnglePair(kPi / 2, kPi / 2), opt);
    const FockOperator rec = reconstruct_operator(a, space);
    CHECK((rec.matrix - p0).cwiseAbs().maxCoeff() < 1e-3);
  }
  SUBCASE("interior identity block at generic angles") {
    CMat proj = CMat::Zero(space.dim, space.dim);
    for (Index k = 0; k < 8; ++k)
      proj(k, k) = 1.0;
    const AFunctionOptions opt = star_options(kAngles, 8, 11.5);
    const AFunction a =
        a_function_operator(FockOperator(space, proj), kAngles, opt);
    const FockOperator rec = reconstruct_operator(a, space);
    CHECK((rec.matrix - proj).cwiseAbs().maxCoeff() < 1e-3);
  }
  SUBCASE("number operator at generic angles") {
    const LadderOps ops = ladder_ops(space);
    const CMat num = ops.a_dagger * ops.a;
    const AFunctionOptions opt = star_options(kAngles, space.dim, 14.0);
    MoyalOptions budget;
    budget.cost_budget = 2e10;
    const AFunction a =
        a_function_operator(FockOperator(space, num), kAngles, opt);
    const FockOperator rec = reconstruct_operator(a, space, budget);
    CHECK((rec.matrix - num).topLeftCorner(12, 12).cwiseAbs().maxCoeff() <
          1e-3);
  }
  SUBCASE("cost guard refuses over-budget grids") {
    CMat p0 = CMat::Zero(space.dim, space.dim);
    p0(0, 0) = 1.0;
    const AFunctionOptions opt =
        star_options(AnglePair(kPi / 2, kPi / 2), 4, 9.0);
    const AFunction a = a_function_operator(FockOperator(space, p0),
                                            AnglePair(kPi / 2, kPi / 2), opt);
    MoyalOptions tiny;
    tiny.cost_budget = 100.0;
    CHECK_THROWS_AS(reconstruct_operator(a, space, tiny),
                    budget_exceeded_error);
  }
}

TEST_CASE("trace products") {
  const FockSpace space(16);
  const AFunctionOptions opt = star_options(kAngles, 6, 9.5);

  SUBCASE("purity of a pure state") {
    const CVec c = coherent_column(space.dim, Complex(0.6, -0.2));
    const AFunction a =
        a_function_operator(FockOperator(space, CMat(c * c.adjoint())),
                            kAngles, opt);
    CHECK(std::abs(trace_product(a, a) - Complex(1.0)) < 1e-3);
  }
  SUBCASE("orthogonal projectors annihilate") {
    CMat p0 = CMat::Zero(space.dim, space.dim);
    p0(0, 0) = 1.0;
    CMat p1 = CMat::Zero(space.dim, space.dim);
    p1(1, 1) = 1.0;
    const AFunction a0 =
        a_function_operator(FockOperator(space, p0), kAngles, opt);
    const AFunction a1 =
        a_function_operator(FockOperator(space, p1), kAngles, opt);
    CHECK(std::abs(trace_product(a0, a1)) < 1e-3);
  }
  SUBCASE("ladder pair reproduces the matrix trace, non-hermitian route") {
    const LadderOps ops = ladder_ops(space);
    const AFunctionOptions wide = star_options(kAngles, space.dim, 14.0);
    const AFunction aa =
        a_function_operator(FockOperator(space, ops.a), kAngles, wide, "a");
    const AFunction aad = a_function_operator(
        FockOperator(space, ops.a_dagger), kAngles, wide, "a_dagger");
    const Complex want = (ops.a * ops.a_dagger).trace();
    CHECK(std::abs(trace_product(aa, aad) - want) < 1e-3 * std::abs(want));
  }
  SUBCASE("angle mismatch is refused") {
    CMat p0 = CMat::Zero(space.dim, space.dim);
    p0(0, 0) = 1.0;
    const AFunction a0 =
        a_function_operator(FockOperator(space, p0), kAngles, opt);
    const AFunction other = a_function_operator(
        FockOperator(space, p0), AnglePair(1.9, 1.5),
        star_options(AnglePair(1.9, 1.5), 4, 9.5));
    CHECK_THROWS_AS(trace_product(a0, other), angle_mismatch_error);
  }
}

TEST_CASE("lemma of the double displacement integral") {
  const FockSpace space(16);
  const AFunctionOptions opt = star_options(kAngles, 10, 9.5);
  for (unsigned seed : {1u, 2u, 3u}) {
    const CVec gamma = damped_state(space.dim, seed);
    const CVec delta = damped_state(space.dim, seed + 10);
    const CVec eps = damped_state(space.dim, seed + 20);
    const CVec zeta = damped_state(space.dim, seed + 30);
    const AFunction a1 = a_function_operator(
        FockOperator(space, CMat(gamma * delta.adjoint())), kAngles, opt);
    const AFunction a2 = a_function_operator(
        FockOperator(space, CMat(zeta * eps.adjoint())), kAngles, opt);
    const RVec w1 = a1.grid.axis1.weights();
    const RVec w2 = a1.grid.axis2.weights();
    const CMat prod = a1.grid.values.conjugate().cwiseProduct(a2.grid.values);
    const Complex integral =
        (w1.cast<Complex>().transpose() * prod * w2.cast<Complex>())(0, 0);
    const Complex lhs = integral / (kPi * kAngles.abs_cos_diff());
    const Complex want =
        (gamma.adjoint() * zeta)(0, 0) * (eps.adjoint() * delta)(0, 0);
    CHECK(std::abs(lhs - want) < 1e-3);
  }
}

TEST_CASE("star products") {
  const FockSpace space(16);

  SUBCASE("projector is star-idempotent") {
    CMat p0 = CMat::Zero(space.dim, space.dim);
    p0(0, 0) = 1.0;
    const AFunctionOptions opt = star_options(kAngles, 4, 9.0);
    const AFunction a =
        a_function_operator(FockOperator(space, p0), kAngles, opt);
    const AFunction prod = star_product(a, a);
    CHECK((prod.grid.values - a.grid.values).cwiseAbs().maxCoeff() < 1e-3);
  }
  SUBCASE("star against the fock product oracle at the wigner pair") {
    // non-commuting coherent dyads keep the weyl tails gaussian
    const CVec c1 = coherent_column(space.dim, Complex(0.5, 0.0));
    const CVec c2 = coherent_column(space.dim, Complex(0.0, 0.5));
    const CMat r1 = c1 * c1.adjoint();
    const CMat r2 = c2 * c2.adjoint();
    const AnglePair wig(kPi / 2, kPi / 2);
    const AFunctionOptions opt = star_options(wig, 6, 9.5);
    const AFunction a1 = a_function_operator(FockOperator(space, r1), wig, opt);
    const AFunction a2 = a_function_operator(FockOperator(space, r2), wig, opt);
    const AFunction prod = star_product(a1, a2);
    const AFunction want = a_function_operator(
        FockOperator(space, CMat(r1 * r2)), wig, opt);
    CHECK((prod.grid.values - want.grid.values).cwiseAbs().maxCoeff() < 1e-3);
  }
  SUBCASE("star against the fock product oracle at generic angles") {
    const CVec c1 = coherent_column(space.dim, Complex(0.5, 0.2));
    const CVec c2 = coherent_column(space.dim, Complex(-0.3, 0.4));
    const CMat rho = c1 * c1.adjoint();
    const CMat dyad = c2 * c1.adjoint();
    const AFunctionOptions opt = star_options(kAngles, 8, 9.5);
    const AFunction a1 =
        a_function_operator(FockOperator(space, rho), kAngles, opt);
    const AFunction a2 =
        a_function_operator(FockOperator(space, dyad), kAngles, opt);
    const AFunction prod = star_product(a1, a2);
    const AFunction want = a_function_operator(
        FockOperator(space, CMat(rho * dyad)), kAngles, opt);
    CHECK((prod.grid.values - want.grid.values).cwiseAbs().maxCoeff() < 1e-3);
  }
}
