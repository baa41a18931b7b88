#ifndef GOSA_SAMPLING_HPP
#define GOSA_SAMPLING_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gosa/model.hpp"

namespace gosa {

// Counter-based random stream: same (seed, stream, counter) always yields
// the same uniform, independent of how work is scheduled. Stream convention:
// 0 = outer sample, 1 = inner sample; replicate b shifts to 2b / 2b+1.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Uniform on the open interval (0,1); never exactly 0 or 1. Two rounds of
// the 64-bit murmur3 finalizer over (seed, stream, counter).
double uniform_at(StreamKey key, std::uint64_t counter);

// Inverse standard normal CDF: Acklam's rational approximation followed by
// one Halley refinement against erfc, absolute error well below 1.2e-9.
double inverse_normal_cdf(double u);

// Inverse-CDF draw from a marginal; u must lie in (0,1).
double draw_marginal(const MarginalSpec& spec, double u);

// Row-major n x d input matrix; entry (j, i) uses counter j*d + i, so any
// partition of rows across workers reproduces the sequential matrix.
std::vector<double> sample_matrix(const ModelSpec& m, std::size_t n, StreamKey key);

}  // namespace gosa

#endif
