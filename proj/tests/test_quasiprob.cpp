#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bifrac/quasiprob.hpp"

#include <cmath>

using namespace bifrac;

namespace {
const AnglePair kAngles(kPi / 3, kPi / 5);

FockOperator vacuum_projector(const FockSpace& space) {
  const CVec v = vacuum_state(space).amplitudes;
  return FockOperator(space, v * v.adjoint());
}
} // namespace

TEST_CASE("cat densities") {
  const FockSpace space(32);
  SUBCASE("pure limit") {
    const FockOperator rho = cat_density(CatState{1.5, 0.3, 1.0}, space);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("balanced mixture matches the gram formula") {
    const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.5}, space);
    const Real overlap2 = std::exp(-4.0 * 4.0); // |<a0|-a0>|^2 at a0 = 2
    CHECK(purity(rho) == doctest::Approx(0.5 + 0.5 * overlap2).epsilon(1e-10));
  }
  SUBCASE("valid density for any weight") {
    for (Real p : {0.0, 0.3, 0.8, 1.0})
      CHECK_NOTHROW(
          require_density_matrix(cat_density(CatState{2.0, 0.0, p}, space)));
    CHECK_THROWS_AS(cat_density(CatState{2.0, 0.0, 1.2}, space),
                    std::invalid_argument);
  }
}

TEST_CASE("a-function special cases") {
  const FockSpace space(32);
  const FockOperator cat = cat_density(CatState{2.0, 0.0, 0.5}, space);
  AFunctionOptions opt;

  SUBCASE("zero angles relabel the weyl function") {
    const AFunction a = a_function(cat, AnglePair(0.0, 0.0), opt);
    const SampledAxis& ax = a.grid.axis1;
    for (Index i = 10; i < ax.n_points; i += 48)
      for (Index j = 10; j < ax.n_points; j += 48)
        CHECK(std::abs(a.grid.values(i, j) -
                       weyl_function(cat, ax[j], -ax[i])) < 1e-8);
    // origin value is the trace
    const Index mid = (ax.n_points - 1) / 2;
    CHECK(std::abs(a.grid.values(mid, mid) - Complex(1.0)) < 1e-8);
  }
  SUBCASE("quarter angles give the wigner function, real valued") {
    const AFunction a = a_function(cat, AnglePair(kPi / 2, kPi / 2), opt);
    const SampledAxis& ax = a.grid.axis1;
    CHECK(a.grid.values.imag().cwiseAbs().maxCoeff() < 1e-6);
    for (Index i = 10; i < ax.n_points; i += 48)
      for (Index j = 10; j < ax.n_points; j += 48)
        CHECK(std::abs(a.grid.values(i, j) -
                       wigner_function(cat, ax[i], ax[j])) < 1e-6);
  }
  SUBCASE("two pipeline bases agree at generic angles") {
    AFunctionOptions weyl_base = opt;
    weyl_base.force_base = 0;
    AFunctionOptions wigner_base = opt;
    wigner_base.force_base = 1;
    const AFunction a0 = a_function(cat, kAngles, weyl_base);
    const AFunction a1 = a_function(cat, kAngles, wigner_base);
    CHECK((a0.grid.values - a1.grid.values).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("squared-marginal identities") {
  const FockSpace space(32);
  AFunctionOptions opt;

  SUBCASE("total for a pure state") {
    const AFunction a = a_function(vacuum_projector(space), kAngles, opt);
    const Real want = kPi * kAngles.abs_cos_diff();
    CHECK(std::abs(marginal_a_squared_total(a) - want) < 1e-3 * want);
  }
  SUBCASE("total for a mixed cat tracks the purity") {
    const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.7}, space);
    const AFunction a = a_function(rho, kAngles, opt);
    const Real want = kPi * kAngles.abs_cos_diff() * purity(rho);
    CHECK(std::abs(marginal_a_squared_total(a) - want) < 1e-3 * want);
  }
  SUBCASE("weyl and wigner cases reduce to the purity") {
    const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.5}, space);
    for (Real t : {0.0, kPi / 2}) {
      const AFunction a = a_function(rho, AnglePair(t, t), opt);
      CHECK(std::abs(marginal_a_squared_total(a) / kPi - purity(rho)) <
            1e-3 * purity(rho));
    }
  }
  SUBCASE("curves integrate to the total") {
    const FockOperator rho = cat_density(CatState{1.5, 0.0, 0.5}, space);
    const AFunction a = a_function(rho, kAngles, opt);
    const MarginalCurve over_alpha = marginal_a_squared(a, true);
    const Real total =
        over_alpha.axis.weights().dot(over_alpha.values);
    CHECK(std::abs(total - marginal_a_squared_total(a)) < 1e-10);
  }
}

TEST_CASE("interpolating moments") {
  const FockSpace space(32);
  AFunctionOptions opt;

  SUBCASE("vacuum wigner moments") {
    const AFunction a =
        a_function(vacuum_projector(space), AnglePair(kPi / 2, kPi / 2), opt);
    const InterpolatingMoments m = interpolating_moments(a);
    const Real want = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(m.delta_alpha - want) < 2e-6);
    CHECK(std::abs(m.delta_beta - want) < 2e-6);
    CHECK(std::abs(m.mean_alpha) < 1e-10);
    CHECK(std::abs(m.mean_beta) < 1e-10);
  }
  SUBCASE("symmetric states have zero interpolating means") {
    const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.5}, space);
    const AFunction a = a_function(rho, kAngles, opt);
    const InterpolatingMoments m = interpolating_moments(a);
    CHECK(std::abs(m.mean_alpha) < 1e-9);
    CHECK(std::abs(m.mean_beta) < 1e-9);
  }
  SUBCASE("cat uncertainty product clears the bound") {
    const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.5}, space);
    const AFunction aw = a_function(rho, AnglePair(kPi / 2, kPi / 2), opt);
    const AFunction a0 = a_function(rho, AnglePair(0.0, 0.0), opt);
    const Real product = interpolating_moments(aw).delta_alpha *
                         interpolating_moments(a0).delta_beta;
    CHECK(product >= 0.5);
  }
}

TEST_CASE("figure curves") {
  const FockSpace space(32);
  AFunctionOptions opt;

  SUBCASE("fig2 masks the excluded row and satisfies the bound at pi/2") {
    const auto rows = figure_curves(FigureKind::Fig2, 8, space, opt);
    REQUIRE(rows.size() == 8);
    CHECK(rows.front().masked);
    for (const FigRow& r : rows) {
      if (r.masked)
        continue;
      if (std::abs(r.x - kPi / 2) < 1e-12)
        CHECK(r.product >= 0.5);
      CHECK(std::isfinite(r.product));
    }
  }
  SUBCASE("fig3 symmetric under p -> 1-p with equal endpoints") {
    const auto rows = figure_curves(FigureKind::Fig3, 5, space, opt);
    REQUIRE(rows.size() == 5);
    CHECK(std::abs(rows.front().product - rows.back().product) < 1e-6);
    for (size_t k = 0; k < rows.size(); ++k)
      CHECK(std::abs(rows[k].product - rows[rows.size() - 1 - k].product) <
            1e-6);
  }
}

TEST_CASE("window guards") {
  const FockSpace space(32);
  const FockOperator rho = cat_density(CatState{2.0, 0.0, 0.5}, space);
  AFunctionOptions tiny;
  tiny.window = 5.0;
  tiny.points = 129;
  CHECK_THROWS_AS(a_function(rho, AnglePair(kPi / 2, kPi / 2), tiny),
                  window_too_small_error);
}
