#include "gosa/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gosa/errors.hpp"

namespace gosa {
namespace oracles {

namespace {

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument(std::string(who) + ": alpha must lie in (0,1)");
}

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double eps, int depth) {
  if (depth > 60) throw numerical_error("adaptive_simpson: maximum recursion depth reached");
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  const double scale = std::max(std::abs(whole), 1e-30);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 0);
}

double example1_quantile(double alpha) {
  check_alpha(alpha, "example1_quantile");
  if (alpha < 0.5) return std::log(2.0 * alpha);
  return -std::log(1.0 - alpha) - std::log(2.0);
}

OracleResult example1_indices(double alpha) {
  check_alpha(alpha, "example1_indices");
  const double min_psi = alpha < 0.5
                             ? alpha * (1.0 - std::log(2.0 * alpha))
                             : (1.0 - alpha) * (1.0 - std::log(2.0 * (1.0 - alpha)));
  const double cond_min_x1 = -alpha * std::log(alpha);              // conditioning on X1
  const double cond_min_x2 = -(1.0 - alpha) * std::log(1.0 - alpha);  // conditioning on X2
  OracleResult r;
  r.s1 = (min_psi - cond_min_x1) / min_psi;
  r.s2 = (min_psi - cond_min_x2) / min_psi;
  r.auxiliary = {{"min_psi", min_psi},
                 {"cond_min_x1", cond_min_x1},
                 {"cond_min_x2", cond_min_x2},
                 {"quantile", example1_quantile(alpha)}};
  return r;
}

OracleResult example2_components(double a, double t, bool force_generic) {
  if (!(a > 0.0)) throw std::invalid_argument("example2_components: a must be > 0");
  if (!(t >= 0.0)) throw std::invalid_argument("example2_components: t must be >= 0");
  if (t == 0.0)
    throw degenerate_error("example2_components: t = 0 gives P(Y >= t) = 1, zero denominator");

  const bool near_1 = !force_generic && std::abs(a - 1.0) < 1e-6;
  const bool near_half = !force_generic && std::abs(a - 0.5) < 1e-6;
  const bool near_2 = !force_generic && std::abs(a - 2.0) < 1e-6;

  const double et = std::exp(-t);
  const double eat = std::exp(-a * t);

  const double survival = near_1 ? (1.0 + t) * et : (a * et - eat) / (a - 1.0);

  double e1;
  if (near_1) {
    e1 = std::exp(-2.0 * t) - (1.0 - t) * et;
  } else if (near_half) {
    e1 = 2.0 * std::exp(-0.5 * t) - (2.0 + t) * et;
  } else {
    e1 = (eat - et) / (1.0 - a) - (std::exp(-2.0 * a * t) - et) / (1.0 - 2.0 * a);
  }

  double e2;
  if (near_1) {
    e2 = std::exp(-2.0 * t) - (1.0 - t) * et;
  } else if (near_2) {
    e2 = 2.0 * et - 2.0 * (t + 1.0) * std::exp(-2.0 * t);
  } else {
    e2 = a * (eat - et) / (1.0 - a) - a * (eat - std::exp(-2.0 * t)) / (2.0 - a);
  }

  const double denominator = survival * (1.0 - survival);
  if (std::abs(denominator) < 1e-300)
    throw degenerate_error("example2_components: vanishing denominator P(1-P)");

  OracleResult r;
  r.s1 = (denominator - e1) / denominator;
  r.s2 = (denominator - e2) / denominator;
  r.auxiliary = {{"survival", survival},
                 {"denominator", denominator},
                 {"e1", e1},
                 {"e2", e2},
                 {"sobol1", a * a / (1.0 + a * a)},
                 {"sobol2", 1.0 / (1.0 + a * a)}};
  return r;
}

OracleResult gaussian_ml_indices(double theta) {
  const double t2 = theta * theta;
  const double norm = kEulerGamma + std::numbers::ln2;
  OracleResult r;
  r.auxiliary["sobol1"] = t2 / (1.0 + t2);
  r.auxiliary["sobol2"] = 1.0 / (1.0 + t2);
  r.auxiliary["denominator"] = norm;

  if (t2 == 0.0) {
    // E ln(chi^2_1) = -(gamma + ln 2), so the second numerator equals the
    // denominator and the first vanishes identically
    r.s1 = 0.0;
    r.s2 = 1.0;
    r.auxiliary["e_ln_num1"] = 0.0;
    r.auxiliary["e_ln_num2"] = -norm;
    return r;
  }

  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  auto expect_over_chi2 = [&](const std::function<double(double)>& g) {
    // E g(xi), xi ~ chi^2_1, via xi = z^2 with z standard normal; the
    // integrand decays like exp(-z^2/2), so [0, 13.5] carries everything
    // at the 1e-8 relative level
    auto integrand = [&](double z) {
      return 2.0 * g(z * z) * inv_sqrt_2pi * std::exp(-0.5 * z * z);
    };
    return adaptive_simpson(integrand, 0.0, 13.5, 1e-9);
  };

  const double e1 = expect_over_chi2([&](double xi) { return std::log1p(t2 * xi); });

  // E ln(theta^2 + xi): the integrand ln(theta^2 + z^2) has a sharp log dip
  // at z = 0 when theta is small, which defeats the adaptive rule. The
  // substitution z = theta sinh w turns it into the smooth 2 ln(theta cosh w).
  const double theta_abs = std::sqrt(t2);
  const double w_hi = std::asinh(13.5 / theta_abs);
  auto ln_cosh = [](double w) {
    return std::abs(w) + std::log1p(std::exp(-2.0 * std::abs(w))) - std::numbers::ln2;
  };
  const double e2 = adaptive_simpson(
      [&](double w) {
        const double z = theta_abs * std::sinh(w);
        const double jacobian = theta_abs * std::cosh(w);
        return 4.0 * (std::log(theta_abs) + ln_cosh(w)) * inv_sqrt_2pi *
               std::exp(-0.5 * z * z) * jacobian;
      },
      0.0, w_hi, 1e-9);
  r.s1 = (std::log1p(t2) - e1) / norm;
  r.s2 = (std::log1p(t2) - e2) / norm;
  r.auxiliary["e_ln_num1"] = e1;
  r.auxiliary["e_ln_num2"] = e2;
  return r;
}

IshigamiSobol ishigami_sobol() {
  constexpr double a = 7.0, b = 0.1;
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double pi8 = pi4 * pi4;
  const double v1 = 0.5 * (1.0 + b * pi4 / 5.0) * (1.0 + b * pi4 / 5.0);
  const double v2 = a * a / 8.0;
  const double var = a * a / 8.0 + b * pi4 / 5.0 + b * b * pi8 / 18.0 + 0.5;
  IshigamiSobol r;
  r.exact_s1 = v1 / var;
  r.exact_s2 = v2 / var;
  r.exact_s3 = 0.0;
  return r;
}

}  // namespace oracles
}  // namespace gosa
