#ifndef GOSA_ESTIMATOR_HPP
#define GOSA_ESTIMATOR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gosa/contrast.hpp"
#include "gosa/model.hpp"

namespace gosa {

struct EstimatorConfig {
  std::size_t n1 = 1000;  // outer sample size, >= 2
  std::size_t n2 = 1000;  // inner sample size, >= 2
  std::uint64_t seed = 0;
  std::vector<std::size_t> subset;  // frozen coordinates, 0-based, nonempty
  std::size_t replicates = 10;      // B >= 1, for the standard error
  // Paired mode evaluates the frozen sample for outer point j from inner row
  // j only (requires n1 == n2); with the mean contrast this reproduces the
  // pick-freeze Sobol estimator exactly.
  bool paired = false;
  // Redraw the inner sample for every outer point instead of sharing one
  // inner set across all outer points (common random numbers).
  bool fresh_inner = false;
  unsigned threads = 1;  // outer-loop workers; results are partition-independent
};

struct IndexEstimate {
  double value = 0.0;        // mean of replicate values
  double numerator = 0.0;    // mean of replicate contrast-variation estimates
  double denominator = 0.0;  // mean of replicate denominators
  std::vector<double> replicate_values;
  double std_error = 0.0;  // sd(replicate values)/sqrt(B); NaN when B == 1
  bool range_flag = false; // value left [0,1] by Monte-Carlo noise (never clipped)
  EstimatorConfig config;
  std::string contrast_id;
  std::string model_id;
};

// Two-step double-loop estimator of the psi-index for the coordinates in
// cfg.subset. Replicate b draws its outer/inner samples from streams 2b and
// 2b+1. Throws degenerate_error when a replicate denominator falls below
// 1e-12 in magnitude.
IndexEstimate estimate_index(const ModelSpec& m, const ContrastSpec& c,
                             const EstimatorConfig& cfg);

// Closed-form pick-freeze Sobol estimator for coordinate k (0-based) with
// n1 = n2 = N and row-j pairing. Streams 0 (outer) and 1 (inner).
double pick_freeze_sobol(const ModelSpec& m, std::size_t k, std::size_t N, std::uint64_t seed);

struct SweepPoint {
  ContrastSpec contrast;
  bool degenerate = false;
  std::string error;       // set when degenerate
  IndexEstimate estimate;  // valid when !degenerate
};

// One estimate per contrast. When every contrast is a Quantile (or every one
// an ExcessProb), the model evaluations of each replicate are shared across
// all grid points and only the losses are re-evaluated; results are
// identical to calling estimate_index point by point. Degenerate points are
// recorded per row, not thrown.
std::vector<SweepPoint> estimate_index_sweep(const ModelSpec& m,
                                             const std::vector<ContrastSpec>& contrasts,
                                             const EstimatorConfig& cfg);

}  // namespace gosa

#endif
