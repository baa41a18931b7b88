#include "gosa/sampling.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gosa {

namespace {

// murmur3 fmix64
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

inline std::uint64_t keyed_word(StreamKey key, std::uint64_t counter) {
  std::uint64_t h = mix64(key.seed + 0x9e3779b97f4a7c15ULL);
  h = mix64(h ^ (key.stream + 0xbf58476d1ce4e5b9ULL));
  std::uint64_t w = mix64(h ^ (counter * 0x94d049bb133111ebULL + 0x2545f4914f6cdd1dULL));
  return mix64(w + counter);
}

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x * std::numbers::sqrt2 / 2.0); }

}  // namespace

double uniform_at(StreamKey key, std::uint64_t counter) {
  // 53-bit mantissa, offset by half a ulp: lies strictly inside (0,1)
  const std::uint64_t w = keyed_word(key, counter);
  return (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-53;
}

double inverse_normal_cdf(double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("inverse_normal_cdf: u must lie in (0,1)");

  // Acklam's rational approximation (relative error < 1.15e-9)
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double u_low = 0.02425;

  double x;
  if (u < u_low) {
    const double q = std::sqrt(-2.0 * std::log(u));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (u <= 1.0 - u_low) {
    const double q = u - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - u));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // one Halley step
  const double e = standard_normal_cdf(x) - u;
  const double v = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= v / (1.0 + 0.5 * x * v);
  return x;
}

double draw_marginal(const MarginalSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0))
    throw std::invalid_argument("draw_marginal: u must lie in (0,1)");
  return std::visit(
      [u](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          return v.lo + u * (v.hi - v.lo);
        } else if constexpr (std::is_same_v<T, Exponential>) {
          return -std::log1p(-u) / v.rate;
        } else if constexpr (std::is_same_v<T, NegatedExponential>) {
          return std::log1p(-u) / v.rate;
        } else {
          return v.mean + v.sd * inverse_normal_cdf(u);
        }
      },
      spec);
}

std::vector<double> sample_matrix(const ModelSpec& m, std::size_t n, StreamKey key) {
  if (n < 1) throw std::invalid_argument("sample_matrix: n must be >= 1");
  const std::size_t d = m.dimension();
  std::vector<double> out(n * d);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < d; ++i)
      out[j * d + i] = draw_marginal(m.marginals()[i],
                                     uniform_at(key, static_cast<std::uint64_t>(j) * d + i));
  return out;
}

}  // namespace gosa
