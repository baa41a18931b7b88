#ifndef GOSA_CONTRAST_HPP
#define GOSA_CONTRAST_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gosa/grid.hpp"

namespace gosa {

// Parametric likelihood family for the maximum-likelihood contrast
// psi(y; theta) = -log p_theta(y), with theta restricted to a compact
// interval for the scalar optimizer.
struct LikelihoodFamily {
  std::string name;
  double theta_lo = 0.0;
  double theta_hi = 1.0;
  std::function<double(double theta, double y)> log_density;
  // Per-sample minimum of -log p_theta(y) over theta. `constrained` selects
  // the variant that respects the family's natural parameter range instead
  // of the unconstrained per-sample optimum.
  std::function<double(double y, bool constrained)> per_sample_min;
};

// Built-in family: Y ~ N(0, theta^2 + 1), the exact linear Gaussian model.
LikelihoodFamily gaussian_linear_family(double theta_lo = 0.0, double theta_hi = 8.0);

struct MeanContrast {};
struct MedianContrast {};
struct QuantileContrast {
  double alpha;  // in (0,1)
};
struct ExcessProbContrast {
  double threshold;
};
// Survival-function contrast; grid nodes are the thresholds, starting at t0.
struct ProbTailContrast {
  Grid grid;
};
// Quantile-tail contrast; grid nodes are quantile levels in (0,1).
struct QuantileTailContrast {
  Grid grid;
};
struct KernelDensityContrast {
  double bandwidth;  // Gaussian kernel window, > 0
  Grid grid;
};
// Projection on the trigonometric orthonormal basis of [support_lo, support_hi],
// constant function first, truncated at `order` (order+1 coefficients).
struct BasisDensityContrast {
  std::size_t order;
  double support_lo;
  double support_hi;
};
struct MaxLikelihoodContrast {
  LikelihoodFamily family;
  bool constrained_min = false;
  double optimizer_tol = 1e-8;
};

using ContrastSpec = std::variant<MeanContrast, MedianContrast, QuantileContrast,
                                  ExcessProbContrast, ProbTailContrast, QuantileTailContrast,
                                  KernelDensityContrast, BasisDensityContrast,
                                  MaxLikelihoodContrast>;

// The feature theta selected by a contrast: a scalar, a grid-sampled
// function, or a coefficient list.
struct ScalarFeature {
  double value;
};
struct GridFunctionFeature {
  Grid grid;
  std::vector<double> values;  // one per node
};
struct CoefficientsFeature {
  std::vector<double> values;
};
using FeatureValue = std::variant<ScalarFeature, GridFunctionFeature, CoefficientsFeature>;

// Throws std::invalid_argument on malformed parameters (alpha outside (0,1),
// non-positive bandwidth, quantile-tail grid outside (0,1), ...).
void validate(const ContrastSpec& c);

// psi(y; theta). Scalar variants expect ScalarFeature, functional variants a
// GridFunctionFeature on the contrast's own grid, BasisDensity a
// CoefficientsFeature of length order+1. Shape mismatch throws
// std::invalid_argument; y outside the BasisDensity support throws
// std::domain_error.
double pointwise_loss(const ContrastSpec& c, double y, const FeatureValue& theta);

// min over theta of psi(y; theta). Zero for every variant except
// MaxLikelihood, whose value comes from the family's per-sample optimum.
double pointwise_min(const ContrastSpec& c, double y);

// Direct empirical feature of a nonempty sample (no optimization except for
// MaxLikelihood, which runs a golden-section search on the theta domain).
FeatureValue empirical_feature(const ContrastSpec& c, std::span<const double> sample);

// Arithmetic mean of pointwise_loss over the sample.
double average_loss(const ContrastSpec& c, std::span<const double> sample,
                    const FeatureValue& theta);

// Short machine identifier, e.g. "quantile" or "prob_tail".
std::string contrast_name(const ContrastSpec& c);
// Full descriptor with parameters and truncation grids, for CSV provenance.
std::string contrast_descriptor(const ContrastSpec& c);
// The sweepable scalar parameter (alpha or threshold), NaN if none.
double contrast_parameter(const ContrastSpec& c);

// Gaussian kernel K_r(u) = K(u/r)/r with K the standard normal density.
double gaussian_kernel(double u, double r);

// j-th element of the trigonometric orthonormal basis of L^2([lo, hi]),
// constant first, then cos/sin pairs of increasing frequency.
double trig_basis(std::size_t j, double y, double lo, double hi);

// Type-1 (left-continuous inverse CDF) empirical quantile: the smallest
// order statistic x_(i) with i/n >= alpha. Exact minimizer of the empirical
// pinball loss.
double empirical_quantile_type1(std::span<const double> sample, double alpha);

}  // namespace gosa

#endif
