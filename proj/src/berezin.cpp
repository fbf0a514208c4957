#include "bifrac/berezin.hpp"

#include <array>
#include <cmath>

namespace bifrac {

BerezinEvaluator::BerezinEvaluator(const AnglePair& angles,
                                   const FockSpace& space,
                                   BifracBuildOptions options)
    : factory_(angles, space, std::move(options)) {}

const CVec& BerezinEvaluator::state_for_label(Complex label) {
  const auto key = std::make_pair(label.real(), label.imag());
  auto it = cache_.find(key);
  if (it == cache_.end()) {
    Real a, b;
    invert_label(label, factory_.angles(), a, b);
    it = cache_.emplace(key, factory_.standard(a, b).state.amplitudes).first;
  }
  return it->second;
}

Complex BerezinEvaluator::l_symbol(const CMat& theta_op, Complex z, Complex w) {
  const CVec& bra = state_for_label(std::conj(z));
  const CVec& ket = state_for_label(std::conj(w));
  const Complex me = (bra.adjoint() * theta_op * ket)(0, 0);
  const Complex pref =
      std::exp(0.5 * std::norm(z) + 0.5 * std::norm(w) - z * std::conj(w));
  return pref * me;
}

Complex l_symbol(const FockOperator& theta_op, Complex z, Complex w,
                 const AnglePair& angles, const BifracBuildOptions& options) {
  BerezinEvaluator eval(angles, theta_op.space, options);
  return eval.l_symbol(theta_op.matrix, z, w);
}

namespace {

SampledAxis sub_axis(const SampledAxis& axis, Index margin) {
  return SampledAxis(axis[margin], axis[axis.n_points - 1 - margin],
                     axis.n_points - 2 * margin);
}

// One application of the bifractional Laplacian by central differences;
// writes garbage on the outermost cells, which the caller trims.
CMat bifrac_laplacian(const CMat& f, Real h1, Real h2, Real sin_diff) {
  const Index m = f.rows(), n = f.cols();
  CMat out = CMat::Zero(m, n);
  for (Index i = 1; i + 1 < m; ++i)
    for (Index j = 1; j + 1 < n; ++j) {
      const Complex faa = (f(i + 1, j) - 2.0 * f(i, j) + f(i - 1, j)) / (h1 * h1);
      const Complex fbb = (f(i, j + 1) - 2.0 * f(i, j) + f(i, j - 1)) / (h2 * h2);
      const Complex fab = (f(i + 1, j + 1) - f(i + 1, j - 1) - f(i - 1, j + 1) +
                           f(i - 1, j - 1)) /
                          (4.0 * h1 * h2);
      out(i, j) = faa + fbb - 2.0 * sin_diff * fab;
    }
  return out;
}

} // namespace

SmoothingResult smoothing_check(const ComplexGrid2D& f, Real k_gauss,
                                const AnglePair& angles, int order) {
  const SampledAxis& a1 = f.axis1;
  const SampledAxis& a2 = f.axis2;
  const Real h1 = a1.spacing(), h2 = a2.spacing();
  const Real sd = std::sin(angles.diff());
  const Real cd2 = angles.cos_diff() * angles.cos_diff();

  // rhs series (1/2) sum_k (Delta/4K)^k F / k!
  CMat series = f.values;
  CMat term = f.values;
  Real prev_norm = term.cwiseAbs().maxCoeff();
  for (int k = 1; k <= order; ++k) {
    term = bifrac_laplacian(term, h1, h2, sd) / (4.0 * k_gauss * Real(k));
    series += term;
    const Index m = k + 1;
    const Real tn = term.block(m, m, term.rows() - 2 * m, term.cols() - 2 * m)
                        .cwiseAbs()
                        .maxCoeff();
    if (k == order && tn > prev_norm && tn > 1e-10)
      throw convergence_failure_error(
          "smoothing_check: series not settled by requested order");
    prev_norm = std::max(tn, 1e-300);
  }
  series *= 0.5;

  // comparison margin: FD cells plus the Gaussian leakage distance
  const Real sigma = std::abs(angles.cos_diff()) / std::sqrt(2.0 * k_gauss);
  const Index margin =
      std::max<Index>(order + 1,
                      static_cast<Index>(std::ceil(6.0 * sigma / h1)) + 1);
  const SampledAxis s1 = sub_axis(a1, margin);
  const SampledAxis s2 = sub_axis(a2, margin);

  const RVec w1 = a1.weights(), w2 = a2.weights();
  const RVec p1 = a1.points(), p2 = a2.points();
  CMat lhs(s1.n_points, s2.n_points);
  const Real norm = k_gauss / (2.0 * kPi * angles.abs_cos_diff());
  for (Index i = 0; i < s1.n_points; ++i) {
    const Real alpha = s1[i];
    for (Index j = 0; j < s2.n_points; ++j) {
      const Real beta = s2[j];
      Complex acc = 0.0;
      for (Index ii = 0; ii < a1.n_points; ++ii) {
        const Real x = alpha - p1(ii);
        for (Index jj = 0; jj < a2.n_points; ++jj) {
          const Real y = beta - p2(jj);
          const Real d2 = x * x + y * y + 2.0 * x * y * sd;
          acc += w1(ii) * w2(jj) * f.values(ii, jj) *
                 std::exp(-k_gauss * d2 / cd2);
        }
      }
      lhs(i, j) = norm * acc;
    }
  }

  CMat rhs = series.block(margin, margin, s1.n_points, s2.n_points);
  const Real err = (lhs - rhs).cwiseAbs().maxCoeff();
  return SmoothingResult{ComplexGrid2D(s1, s2, std::move(lhs)),
                         ComplexGrid2D(s1, s2, std::move(rhs)), err, margin};
}

namespace {

// Minimal central-difference stencils of O(h^2) for derivatives 0..6.
const std::array<std::vector<Real>, 7> kCentral = {{
    {1.0},
    {-0.5, 0.0, 0.5},
    {1.0, -2.0, 1.0},
    {-0.5, 1.0, 0.0, -1.0, 0.5},
    {1.0, -4.0, 6.0, -4.0, 1.0},
    {-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5},
    {1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0},
}};

// Cartesian partials d^p_x d^q_y F at the stencil center.
Complex cartesian_partial(const CMat& samples, int radius, Real h, int p,
                          int q) {
  const auto& cx = kCentral[p];
  const auto& cy = kCentral[q];
  const int rx = int(cx.size() - 1) / 2;
  const int ry = int(cy.size() - 1) / 2;
  Complex acc = 0.0;
  for (int i = -rx; i <= rx; ++i)
    for (int j = -ry; j <= ry; ++j)
      acc += cx[i + rx] * cy[j + ry] * samples(radius + i, radius + j);
  return acc / std::pow(h, Real(p + q));
}

Complex binom(int n, int k) {
  Real b = 1.0;
  for (int i = 0; i < k; ++i)
    b *= Real(n - i) / Real(i + 1);
  return b;
}

Complex ipow(int k) {
  switch (((k % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

} // namespace

BerezinExpansion berezin_product(const FockOperator& theta1_op,
                                 const FockOperator& theta2_op, Complex z,
                                 const AnglePair& angles, int order, Real step,
                                 const BifracBuildOptions& options,
                                 bool paper_sin_terms) {
  if (order < 0 || order > 3)
    throw std::invalid_argument("berezin_product: order must be in [0,3]");
  const FockSpace& space = theta1_op.space;
  BerezinEvaluator eval(angles, space, options);

  const CMat product = theta1_op.matrix * theta2_op.matrix;
  BerezinExpansion out;
  out.full = eval.l_symbol(product, z, z);

  const int radius = std::max(1, order);
  auto sample = [&](Real h) {
    CMat f(2 * radius + 1, 2 * radius + 1);
    for (int i = -radius; i <= radius; ++i)
      for (int j = -radius; j <= radius; ++j) {
        const Complex zeta = z + Complex(Real(i) * h, Real(j) * h);
        f(radius + i, radius + j) =
            eval.l_symbol(theta1_op.matrix, z, zeta) *
            eval.l_symbol(theta2_op.matrix, zeta, z);
      }
    return f;
  };
  const CMat f_h = sample(step);
  const CMat f_h2 = sample(step / 2.0);

  // Wirtinger monomial coefficients of (Delta/4)^k on d^a d*^b; the label
  // map makes the quarter Laplacian the plain mixed derivative
  const Real sd = paper_sin_terms ? std::sin(angles.diff()) : 0.0;
  using Key = std::pair<int, int>;
  std::map<Key, Complex> op{{{0, 0}, 1.0}};
  auto apply_quarter_laplacian = [&](const std::map<Key, Complex>& in) {
    std::map<Key, Complex> next;
    for (const auto& [key, c] : in) {
      next[{key.first + 1, key.second + 1}] += c;
      if (sd != 0.0) {
        next[{key.first + 2, key.second}] += c * Complex(0.0, -0.5 * sd);
        next[{key.first, key.second + 2}] += c * Complex(0.0, 0.5 * sd);
      }
    }
    return next;
  };

  auto wirtinger = [&](const CMat& f, Real h, int a, int b) {
    // d^a d*^b = 2^-(a+b) (dx - i dy)^a (dx + i dy)^b
    Complex acc = 0.0;
    for (int i = 0; i <= a; ++i)
      for (int j = 0; j <= b; ++j) {
        const Complex coeff = binom(a, i) * binom(b, j) * ipow(b - j) *
                              std::conj(ipow(a - i));
        acc += coeff * cartesian_partial(f, radius, h, i + j, (a - i) + (b - j));
      }
    return acc / std::pow(2.0, Real(a + b));
  };

  Real factorial = 1.0;
  Complex partial = 0.0;
  Real richardson_term1 = 0.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      op = apply_quarter_laplacian(op);
      factorial *= Real(k);
    }
    Complex term_h = 0.0, term_h2 = 0.0;
    for (const auto& [key, c] : op) {
      term_h += c * wirtinger(f_h, step, key.first, key.second);
      term_h2 += c * wirtinger(f_h2, step / 2.0, key.first, key.second);
    }
    // one Richardson halving on the O(h^2) central differences
    const Complex term = (4.0 * term_h2 - term_h) / 3.0 / factorial;
    if (k == 1)
      richardson_term1 = std::abs(term_h2 - term_h) / factorial;
    out.terms.push_back(term);
    partial += term;
    out.partials.push_back(partial);
  }
  out.stencil_estimate = richardson_term1;
  if (order >= 1 &&
      richardson_term1 > 0.05 * (std::abs(out.full) + 1e-6))
    throw stencil_too_coarse_error(
        "berezin_product: Richardson check failed, step sensitivity " +
        std::to_string(richardson_term1));
  return out;
}

} // namespace bifrac
