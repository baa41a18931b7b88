#ifndef GOSA_ORACLES_HPP
#define GOSA_ORACLES_HPP

#include <functional>
#include <map>
#include <string>

namespace gosa {
namespace oracles {

struct OracleResult {
  double s1 = 0.0;
  double s2 = 0.0;
  std::map<std::string, double> auxiliary;
};

// Laplace(0,1) quantile: log(2a) below the median, -log(2(1-a)) above.
double example1_quantile(double alpha);

// Closed-form quantile-contrast indices for Y = X1 + X2 with X1 ~ Exp(1)
// and X2 distributed as -Exp(1). Auxiliary: min_psi, cond_min_x1,
// cond_min_x2, quantile.
OracleResult example1_indices(double alpha);

// Excess-probability indices for Y = X1 + X2, X1 ~ Exp(1), X2 ~ Exp(a).
// Dedicated branches for a in {1, 1/2, 2} (within 1e-6); `force_generic`
// bypasses the routing so the special branches can be checked against
// generic-branch limits. Auxiliary: survival, denominator, e1, e2, sobol1,
// sobol2. Throws degenerate_error at t = 0 (the denominator P(1-P) is 0).
OracleResult example2_components(double a, double t, bool force_generic = false);

// Maximum-likelihood indices for Y = theta*X1 + X2 with (X1, X2) standard
// normal. The chi-squared expectations are evaluated by adaptive quadrature
// (rel. tol 1e-8) after the xi = z^2 substitution. Auxiliary: sobol1,
// sobol2, e_ln_num1, e_ln_num2, denominator.
OracleResult gaussian_ml_indices(double theta);

struct IshigamiSobol {
  // the conventional rounded reference values
  double s1 = 0.3139, s2 = 0.4424, s3 = 0.0;
  // exact values from the Ishigami variance decomposition
  double exact_s1 = 0.0, exact_s2 = 0.0, exact_s3 = 0.0;
};
IshigamiSobol ishigami_sobol();

inline constexpr double kEulerGamma = 0.5772156649015329;

// Adaptive Simpson quadrature of f over [a, b] to the given relative
// tolerance. Used by the oracles and handy for test cross-checks.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol = 1e-10);

}  // namespace oracles
}  // namespace gosa

#endif
