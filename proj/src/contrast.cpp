#include "gosa/contrast.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gosa/errors.hpp"
#include "gosa/optimize.hpp"

namespace gosa {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2*pi)/2

const ScalarFeature& as_scalar(const FeatureValue& f, const char* who) {
  if (const auto* s = std::get_if<ScalarFeature>(&f)) return *s;
  throw std::invalid_argument(std::string(who) + ": expected a scalar feature");
}

const GridFunctionFeature& as_grid_function(const FeatureValue& f, const Grid& grid,
                                            const char* who) {
  const auto* g = std::get_if<GridFunctionFeature>(&f);
  if (!g) throw std::invalid_argument(std::string(who) + ": expected a grid-function feature");
  if (!(g->grid == grid))
    throw std::invalid_argument(std::string(who) + ": feature grid differs from contrast grid");
  if (g->values.size() != grid.size())
    throw std::invalid_argument(std::string(who) + ": feature length != grid length");
  return *g;
}

double pinball(double y, double theta, double alpha) {
  return (y - theta) * (alpha - (y <= theta ? 1.0 : 0.0));
}

void check_nonempty(std::span<const double> sample, const char* who) {
  if (sample.empty()) throw std::invalid_argument(std::string(who) + ": empty sample");
}

}  // namespace

LikelihoodFamily gaussian_linear_family(double theta_lo, double theta_hi) {
  LikelihoodFamily fam;
  fam.name = "gaussian_linear";
  fam.theta_lo = theta_lo;
  fam.theta_hi = theta_hi;
  fam.log_density = [](double theta, double y) {
    const double s = theta * theta + 1.0;
    return -0.5 * y * y / s - 0.5 * std::log(2.0 * std::numbers::pi * s);
  };
  fam.per_sample_min = [](double y, bool constrained) {
    const double y2 = y * y;
    if (constrained && y2 < 1.0) {
      // variance pinned at its lower bound theta^2 + 1 = 1
      return 0.5 * y2 + kHalfLog2Pi;
    }
    if (y2 == 0.0)
      throw degenerate_error("gaussian_linear per-sample minimum: y = 0 (unbounded below)");
    // unconstrained optimum of y^2/(2s) + log(2*pi*s)/2 at s = y^2
    return 0.5 * (1.0 + std::log(2.0 * std::numbers::pi * y2));
  };
  return fam;
}

void validate(const ContrastSpec& c) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QuantileContrast>) {
          if (!(v.alpha > 0.0 && v.alpha < 1.0))
            throw std::invalid_argument("quantile contrast: alpha must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, QuantileTailContrast>) {
          if (!(v.grid.front() > 0.0 && v.grid.back() < 1.0))
            throw std::invalid_argument("quantile-tail contrast: grid must lie in (0,1)");
        } else if constexpr (std::is_same_v<T, KernelDensityContrast>) {
          if (!(v.bandwidth > 0.0))
            throw std::invalid_argument("kernel-density contrast: bandwidth must be > 0");
        } else if constexpr (std::is_same_v<T, BasisDensityContrast>) {
          if (!(v.support_lo < v.support_hi))
            throw std::invalid_argument("basis-density contrast: empty support interval");
        } else if constexpr (std::is_same_v<T, MaxLikelihoodContrast>) {
          if (!(v.family.theta_lo < v.family.theta_hi))
            throw std::invalid_argument("max-likelihood contrast: empty theta domain");
          if (!v.family.log_density || !v.family.per_sample_min)
            throw std::invalid_argument("max-likelihood contrast: family not fully defined");
        }
      },
      c);
}

double gaussian_kernel(double u, double r) {
  const double z = u / r;
  return std::exp(-0.5 * z * z) / (r * std::sqrt(2.0 * std::numbers::pi));
}

double trig_basis(std::size_t j, double y, double lo, double hi) {
  const double len = hi - lo;
  if (j == 0) return 1.0 / std::sqrt(len);
  const double k = static_cast<double>((j + 1) / 2);
  const double arg = 2.0 * std::numbers::pi * k * (y - lo) / len;
  const double amp = std::sqrt(2.0 / len);
  return (j % 2 == 1) ? amp * std::cos(arg) : amp * std::sin(arg);
}

double empirical_quantile_type1(std::span<const double> sample, double alpha) {
  check_nonempty(sample, "empirical_quantile_type1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("empirical_quantile_type1: alpha must lie in (0,1)");
  const std::size_t n = sample.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n)));
  if (rank < 1) rank = 1;
  if (rank > n) rank = n;
  std::vector<double> work(sample.begin(), sample.end());
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(rank - 1), work.end());
  return work[rank - 1];
}

double pointwise_loss(const ContrastSpec& c, double y, const FeatureValue& theta) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MeanContrast>) {
          const double d = y - as_scalar(theta, "mean").value;
          return d * d;
        } else if constexpr (std::is_same_v<T, MedianContrast>) {
          return 0.5 * std::abs(y - as_scalar(theta, "median").value);
        } else if constexpr (std::is_same_v<T, QuantileContrast>) {
          return pinball(y, as_scalar(theta, "quantile").value, v.alpha);
        } else if constexpr (std::is_same_v<T, ExcessProbContrast>) {
          const double d = (y >= v.threshold ? 1.0 : 0.0) - as_scalar(theta, "excess").value;
          return d * d;
        } else if constexpr (std::is_same_v<T, ProbTailContrast>) {
          const auto& g = as_grid_function(theta, v.grid, "prob_tail");
          const auto& nodes = v.grid.nodes();
          std::size_t i = 0;
          return v.grid.trapezoid([&](double t) {
            const double d = (y >= t ? 1.0 : 0.0) - g.values[i++];
            return d * d;
          });
        } else if constexpr (std::is_same_v<T, QuantileTailContrast>) {
          const auto& g = as_grid_function(theta, v.grid, "quantile_tail");
          std::size_t i = 0;
          return v.grid.trapezoid([&](double alpha) { return pinball(y, g.values[i++], alpha); });
        } else if constexpr (std::is_same_v<T, KernelDensityContrast>) {
          const auto& g = as_grid_function(theta, v.grid, "kernel_density");
          std::size_t i = 0;
          return v.grid.trapezoid([&](double t) {
            const double d = gaussian_kernel(y - t, v.bandwidth) - g.values[i++];
            return d * d;
          });
        } else if constexpr (std::is_same_v<T, BasisDensityContrast>) {
          const auto* coef = std::get_if<CoefficientsFeature>(&theta);
          if (!coef)
            throw std::invalid_argument("basis_density: expected a coefficients feature");
          if (coef->values.size() != v.order + 1)
            throw std::invalid_argument("basis_density: need order+1 coefficients");
          if (y < v.support_lo || y > v.support_hi)
            throw std::domain_error("basis_density: y outside the support interval");
          double acc = 0.0;
          for (std::size_t j = 0; j <= v.order; ++j) {
            const double d = trig_basis(j, y, v.support_lo, v.support_hi) - coef->values[j];
            acc += d * d;
          }
          return acc;
        } else {
          static_assert(std::is_same_v<T, MaxLikelihoodContrast>);
          return -v.family.log_density(as_scalar(theta, "max_likelihood").value, y);
        }
      },
      c);
}

double pointwise_min(const ContrastSpec& c, double y) {
  if (const auto* ml = std::get_if<MaxLikelihoodContrast>(&c))
    return ml->family.per_sample_min(y, ml->constrained_min);
  return 0.0;
}

FeatureValue empirical_feature(const ContrastSpec& c, std::span<const double> sample) {
  check_nonempty(sample, "empirical_feature");
  return std::visit(
      [&](const auto& v) -> FeatureValue {
        using T = std::decay_t<decltype(v)>;
        const double n = static_cast<double>(sample.size());
        if constexpr (std::is_same_v<T, MeanContrast>) {
          double s = 0.0;
          for (double y : sample) s += y;
          return ScalarFeature{s / n};
        } else if constexpr (std::is_same_v<T, MedianContrast>) {
          return ScalarFeature{empirical_quantile_type1(sample, 0.5)};
        } else if constexpr (std::is_same_v<T, QuantileContrast>) {
          return ScalarFeature{empirical_quantile_type1(sample, v.alpha)};
        } else if constexpr (std::is_same_v<T, ExcessProbContrast>) {
          double s = 0.0;
          for (double y : sample) s += (y >= v.threshold ? 1.0 : 0.0);
          return ScalarFeature{s / n};
        } else if constexpr (std::is_same_v<T, ProbTailContrast>) {
          std::vector<double> values;
          values.reserve(v.grid.size());
          for (double t : v.grid.nodes()) {
            double s = 0.0;
            for (double y : sample) s += (y >= t ? 1.0 : 0.0);
            values.push_back(s / n);
          }
          return GridFunctionFeature{v.grid, std::move(values)};
        } else if constexpr (std::is_same_v<T, QuantileTailContrast>) {
          std::vector<double> sorted(sample.begin(), sample.end());
          std::sort(sorted.begin(), sorted.end());
          std::vector<double> values;
          values.reserve(v.grid.size());
          for (double alpha : v.grid.nodes()) {
            std::size_t rank =
                static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(sorted.size())));
            rank = std::min(std::max<std::size_t>(rank, 1), sorted.size());
            values.push_back(sorted[rank - 1]);
          }
          return GridFunctionFeature{v.grid, std::move(values)};
        } else if constexpr (std::is_same_v<T, KernelDensityContrast>) {
          std::vector<double> values;
          values.reserve(v.grid.size());
          for (double t : v.grid.nodes()) {
            double s = 0.0;
            for (double y : sample) s += gaussian_kernel(y - t, v.bandwidth);
            values.push_back(s / n);
          }
          return GridFunctionFeature{v.grid, std::move(values)};
        } else if constexpr (std::is_same_v<T, BasisDensityContrast>) {
          std::vector<double> coef(v.order + 1, 0.0);
          for (double y : sample) {
            if (y < v.support_lo || y > v.support_hi)
              throw std::domain_error("basis_density: sample point outside the support interval");
            for (std::size_t j = 0; j <= v.order; ++j)
              coef[j] += trig_basis(j, y, v.support_lo, v.support_hi);
          }
          for (double& cj : coef) cj /= n;
          return CoefficientsFeature{std::move(coef)};
        } else {
          static_assert(std::is_same_v<T, MaxLikelihoodContrast>);
          auto objective = [&](double theta) {
            double s = 0.0;
            for (double y : sample) s -= v.family.log_density(theta, y);
            return s / n;
          };
          return ScalarFeature{golden_section_minimize(objective, v.family.theta_lo,
                                                       v.family.theta_hi, v.optimizer_tol)};
        }
      },
      c);
}

double average_loss(const ContrastSpec& c, std::span<const double> sample,
                    const FeatureValue& theta) {
  check_nonempty(sample, "average_loss");
  double s = 0.0;
  for (double y : sample) s += pointwise_loss(c, y, theta);
  return s / static_cast<double>(sample.size());
}

std::string contrast_name(const ContrastSpec& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, MeanContrast>) return "mean";
        else if constexpr (std::is_same_v<T, MedianContrast>) return "median";
        else if constexpr (std::is_same_v<T, QuantileContrast>) return "quantile";
        else if constexpr (std::is_same_v<T, ExcessProbContrast>) return "excess";
        else if constexpr (std::is_same_v<T, ProbTailContrast>) return "prob_tail";
        else if constexpr (std::is_same_v<T, QuantileTailContrast>) return "quantile_tail";
        else if constexpr (std::is_same_v<T, KernelDensityContrast>) return "kernel_density";
        else if constexpr (std::is_same_v<T, BasisDensityContrast>) return "basis_density";
        else return "max_likelihood";
      },
      c);
}

namespace {
std::string grid_descriptor(const Grid& g) {
  std::ostringstream os;
  os << g.front() << ".." << g.back() << "/" << g.size();
  return os.str();
}
}  // namespace

std::string contrast_descriptor(const ContrastSpec& c) {
  std::ostringstream os;
  os << contrast_name(c);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, QuantileContrast>) {
          os << "(alpha=" << v.alpha << ")";
        } else if constexpr (std::is_same_v<T, ExcessProbContrast>) {
          os << "(t=" << v.threshold << ")";
        } else if constexpr (std::is_same_v<T, ProbTailContrast>) {
          os << "(grid=" << grid_descriptor(v.grid) << ")";
        } else if constexpr (std::is_same_v<T, QuantileTailContrast>) {
          os << "(grid=" << grid_descriptor(v.grid) << ")";
        } else if constexpr (std::is_same_v<T, KernelDensityContrast>) {
          os << "(r=" << v.bandwidth << ",grid=" << grid_descriptor(v.grid) << ")";
        } else if constexpr (std::is_same_v<T, BasisDensityContrast>) {
          os << "(order=" << v.order << ",support=[" << v.support_lo << "," << v.support_hi
             << "])";
        } else if constexpr (std::is_same_v<T, MaxLikelihoodContrast>) {
          os << "(" << v.family.name << ",domain=[" << v.family.theta_lo << ","
             << v.family.theta_hi << "]" << (v.constrained_min ? ",constrained" : "") << ")";
        }
      },
      c);
  return os.str();
}

double contrast_parameter(const ContrastSpec& c) {
  if (const auto* q = std::get_if<QuantileContrast>(&c)) return q->alpha;
  if (const auto* e = std::get_if<ExcessProbContrast>(&c)) return e->threshold;
  return std::nan("");
}

}  // namespace gosa
