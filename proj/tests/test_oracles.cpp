#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "gosa/errors.hpp"
#include "gosa/optimize.hpp"
#include "gosa/oracles.hpp"

using namespace gosa;
using namespace gosa::oracles;

namespace {

double pinball(double y, double theta, double alpha) {
  return (y - theta) * (alpha - (y <= theta ? 1.0 : 0.0));
}

// Integrate f over [lo, hi], splitting at the listed kink locations so the
// adaptive rule only ever sees smooth pieces.
double integrate_piecewise(const std::function<double(double)>& f, double lo, double hi,
                           std::vector<double> kinks) {
  kinks.push_back(lo);
  kinks.push_back(hi);
  std::sort(kinks.begin(), kinks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i) {
    const double a = std::clamp(kinks[i], lo, hi);
    const double b = std::clamp(kinks[i + 1], lo, hi);
    if (b > a) total += adaptive_simpson(f, a, b, 1e-9);
  }
  return total;
}

// Quadrature of the average pinball contrast against the Laplace(0,1)
// density, independent of the closed-form route.
double laplace_contrast(double theta, double alpha) {
  auto f = [&](double x) { return pinball(x, theta, alpha) * 0.5 * std::exp(-std::abs(x)); };
  return integrate_piecewise(f, -40.0, 40.0, {0.0, theta});
}

}  // namespace

TEST_CASE("example 1 quantile") {
  CHECK(example1_quantile(0.5) == doctest::Approx(0.0));
  CHECK(example1_quantile(0.75) == doctest::Approx(std::log(2.0)));
  CHECK(example1_quantile(0.25) == doctest::Approx(-std::log(2.0)));
  CHECK_THROWS_AS(example1_quantile(0.0), std::invalid_argument);
  CHECK_THROWS_AS(example1_quantile(1.0), std::invalid_argument);

  // numeric inversion of F(x) = 1 - exp(-x)/2 on the positive half line
  for (double alpha : {0.6, 0.75, 0.9, 0.99}) {
    const double q = example1_quantile(alpha);
    CHECK(1.0 - 0.5 * std::exp(-q) == doctest::Approx(alpha).epsilon(1e-12));
  }
}

TEST_CASE("example 1 indices against an independent quadrature oracle") {
  const double alpha = 0.5;

  // unconditional minimum of the contrast over theta
  const double min_psi = laplace_contrast(
      golden_section_minimize([&](double t) { return laplace_contrast(t, alpha); }, -5.0, 5.0,
                              1e-7),
      alpha);

  // conditional minimum given X1: Y = x + X2 with X2 ~ -Exp(1), so by shift
  // invariance the conditional optimum value is the X2 pinball minimum
  auto x2_pinball = [&](double theta) {
    return integrate_piecewise(
        [&](double s) { return pinball(s, theta, alpha) * std::exp(s); }, -40.0, 0.0, {theta});
  };
  const double cond_min = x2_pinball(golden_section_minimize(x2_pinball, -20.0, 0.0, 1e-7));

  const double s1_quadrature = (min_psi - cond_min) / min_psi;
  const auto r = example1_indices(alpha);
  CHECK(r.s1 == doctest::Approx(s1_quadrature).epsilon(1e-6));
  CHECK(r.s1 == doctest::Approx(1.0 + std::log(0.5)).epsilon(1e-12));
  CHECK(r.s2 == doctest::Approx(r.s1).epsilon(1e-12));
}

TEST_CASE("example 1 index limits and ordering") {
  // the first variable dominates in the upper tail (convergence to the
  // limits 1 and 0 is only logarithmic in alpha, hence the loose bounds)
  CHECK(example1_indices(0.9999).s1 > 0.85);
  CHECK(example1_indices(0.9999).s2 < 0.05);
  CHECK(example1_indices(0.0001).s2 > 0.85);
  CHECK(example1_indices(0.999999).s1 > example1_indices(0.9999).s1);
  CHECK(example1_indices(0.999999).s2 < example1_indices(0.9999).s2);
  CHECK(example1_indices(0.3).s1 < example1_indices(0.3).s2);
  CHECK(example1_indices(0.8).s1 > example1_indices(0.8).s2);
}

TEST_CASE("example 1 branch continuity and symmetry") {
  const double eps = 1e-9;
  CHECK(std::abs(example1_indices(0.5 - eps).s1 - example1_indices(0.5 + eps).s1) < 1e-7);
  for (double alpha = 0.05; alpha < 1.0; alpha += 0.05) {
    const auto a = example1_indices(alpha);
    const auto b = example1_indices(1.0 - alpha);
    CHECK(a.s1 == doctest::Approx(b.s2).epsilon(1e-12));
    CHECK(a.s1 >= 0.0);
    CHECK(a.s1 <= 1.0);
    CHECK(a.s2 >= 0.0);
    CHECK(a.s2 <= 1.0);
  }
}

TEST_CASE("example 2 components") {
  const auto r = example2_components(1.0, 1.0);
  CHECK(r.auxiliary.at("e1") == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  CHECK(r.auxiliary.at("e1") == r.auxiliary.at("e2"));  // exchangeable summands
  CHECK(r.auxiliary.at("survival") == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-12));
  CHECK(r.auxiliary.at("sobol1") == doctest::Approx(0.5));
  CHECK(r.auxiliary.at("sobol2") == doctest::Approx(0.5));

  // the a = 1 survival, checked against the numeric integral of x exp(-x)
  for (double t : {0.5, 1.0, 3.0}) {
    const double numeric =
        adaptive_simpson([](double x) { return x * std::exp(-x); }, t, 60.0, 1e-11);
    CHECK(example2_components(1.0, t).auxiliary.at("survival") ==
          doctest::Approx(numeric).epsilon(1e-9));
  }

  CHECK_THROWS_AS(example2_components(1.0, 0.0), degenerate_error);
  CHECK_THROWS_AS(example2_components(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(example2_components(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("example 2 special branches are limits of the generic branch") {
  for (double a0 : {1.0, 0.5, 2.0}) {
    const auto special = example2_components(a0, 1.5);
    for (double da : {-1e-7, 1e-7}) {
      const auto generic = example2_components(a0 + da, 1.5, /*force_generic=*/true);
      CHECK(std::abs(generic.auxiliary.at("e1") - special.auxiliary.at("e1")) < 1e-5);
      CHECK(std::abs(generic.auxiliary.at("e2") - special.auxiliary.at("e2")) < 1e-5);
      CHECK(std::abs(generic.auxiliary.at("survival") - special.auxiliary.at("survival")) < 1e-5);
    }
  }
  // near-special inputs are routed to the special branch
  CHECK(example2_components(1.0 + 1e-8, 1.0).auxiliary.at("e1") ==
        example2_components(1.0, 1.0).auxiliary.at("e1"));
}

TEST_CASE("example 2 indices stay in [0,1] over a parameter sweep") {
  for (double a : {0.3, 0.5, 0.99, 1.0, 1.3, 2.0, 4.0}) {
    for (double t = 0.25; t <= 5.0; t += 0.25) {
      const auto r = example2_components(a, t);
      CHECK(r.s1 >= -1e-12);
      CHECK(r.s1 <= 1.0 + 1e-12);
      CHECK(r.s2 >= -1e-12);
      CHECK(r.s2 <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("gaussian ML indices") {
  const auto at0 = gaussian_ml_indices(0.0);
  CHECK(at0.s1 == 0.0);
  CHECK(at0.s2 == 1.0);

  const auto at1 = gaussian_ml_indices(1.0);
  CHECK(at1.s1 == doctest::Approx(at1.s2).epsilon(1e-10));  // same integrand at theta = 1
  CHECK(at1.auxiliary.at("sobol1") == doctest::Approx(0.5));

  // continuity toward the theta = 0 branch
  CHECK(gaussian_ml_indices(1e-4).s2 == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(gaussian_ml_indices(1e-4).s1 == doctest::Approx(0.0).epsilon(1e-3));

  // indices in [0,1] and ranking consistent with Sobol over a theta sweep
  for (double theta = 0.0; theta <= 2.0; theta += 0.125) {
    const auto r = gaussian_ml_indices(theta);
    CHECK(r.s1 >= -1e-9);
    CHECK(r.s1 <= 1.0 + 1e-9);
    CHECK(r.s2 >= -1e-9);
    CHECK(r.s2 <= 1.0 + 1e-9);
    const double sob_gap = r.auxiliary.at("sobol1") - r.auxiliary.at("sobol2");
    if (std::abs(theta - 1.0) > 1e-9)
      CHECK((r.s1 - r.s2) * sob_gap > 0.0);
  }
}

TEST_CASE("gaussian ML quadrature against a Monte-Carlo cross-check") {
  // E ln(1 + xi) for xi ~ chi^2_1, via a plain normal-sample average
  const double quad = gaussian_ml_indices(1.0).auxiliary.at("e_ln_num1");
  std::mt19937_64 rng(23);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = 2000000;
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = normal(rng);
    const double v = std::log1p(z * z);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(quad - mean) < 3.0 * se);
}

TEST_CASE("ishigami sobol constants") {
  const auto r = ishigami_sobol();
  CHECK(r.s1 == 0.3139);
  CHECK(r.s2 == 0.4424);
  CHECK(r.s3 == 0.0);
  CHECK(r.s1 + r.s2 + r.s3 <= 1.0);
  // the exact decomposition rounds to the conventional figures
  CHECK(std::round(r.exact_s1 * 1e4) / 1e4 == doctest::Approx(0.3139));
  CHECK(std::round(r.exact_s2 * 1e4) / 1e4 == doctest::Approx(0.4424));
  CHECK(r.exact_s3 == 0.0);
}
