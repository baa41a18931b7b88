#ifndef GOSA_OPTIMIZE_HPP
#define GOSA_OPTIMIZE_HPP

#include <cmath>
#include <stdexcept>

#include "gosa/errors.hpp"

namespace gosa {

// Golden-section minimization of a unimodal scalar function on [lo, hi].
// Returns the abscissa of the minimum to absolute tolerance `tol`.
template <class F>
double golden_section_minimize(F&& f, double lo, double hi, double tol = 1e-8) {
  if (!(lo < hi)) throw std::invalid_argument("golden_section_minimize: lo >= hi");
  if (!(tol > 0.0)) throw std::invalid_argument("golden_section_minimize: tol <= 0");
  constexpr double invphi = 0.6180339887498949;   // 1/phi
  constexpr double invphi2 = 0.3819660112501051;  // 1/phi^2
  double a = lo, b = hi;
  double c = a + invphi2 * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  if (!std::isfinite(fc) || !std::isfinite(fd))
    throw numerical_error("golden_section_minimize: non-finite objective");
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = a + invphi2 * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
    if (!std::isfinite(fc) || !std::isfinite(fd))
      throw numerical_error("golden_section_minimize: non-finite objective");
  }
  return 0.5 * (a + b);
}

}  // namespace gosa

#endif
