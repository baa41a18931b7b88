#include "gosa/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "gosa/errors.hpp"
#include "gosa/sampling.hpp"

namespace gosa {

namespace {

constexpr double kDegenerateTol = 1e-12;

void validate_config(const ModelSpec& m, const EstimatorConfig& cfg) {
  if (cfg.n1 < 2 || cfg.n2 < 2)
    throw std::invalid_argument("EstimatorConfig: n1 and n2 must be >= 2");
  if (cfg.replicates < 1) throw std::invalid_argument("EstimatorConfig: replicates must be >= 1");
  if (cfg.subset.empty()) throw std::invalid_argument("EstimatorConfig: empty subset");
  std::vector<std::size_t> sorted = cfg.subset;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("EstimatorConfig: duplicate subset index");
  if (sorted.back() >= m.dimension())
    throw std::invalid_argument("EstimatorConfig: subset index out of range");
  if (cfg.paired && cfg.n1 != cfg.n2)
    throw std::invalid_argument("EstimatorConfig: paired mode requires n1 == n2");
  if (cfg.paired && cfg.fresh_inner)
    throw std::invalid_argument("EstimatorConfig: paired and fresh-inner modes are exclusive");
}

// Runs body(begin, end) over a contiguous partition of [0, n). The partition
// only distributes work; every per-index result lands in its own slot, so
// the outcome is independent of the worker count.
void parallel_blocks(std::size_t n, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (threads <= 1 || n < 2) {
    body(0, n);
    return;
  }
  const std::size_t t = std::min<std::size_t>(threads, n);
  const std::size_t chunk = (n + t - 1) / t;
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  for (auto& th : pool) th.join();
}

bool all_quantile(const std::vector<ContrastSpec>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const ContrastSpec& c) {
    return std::holds_alternative<QuantileContrast>(c);
  });
}

bool all_excess(const std::vector<ContrastSpec>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const ContrastSpec& c) {
    return std::holds_alternative<ExcessProbContrast>(c);
  });
}

struct ReplicateResult {
  std::vector<double> numerator;    // per contrast
  std::vector<double> denominator;  // per contrast
};

// One replicate of the two-step procedure, shared by estimate_index and the
// sweep. Step 1: outer sample, output feature theta*. Step 2: inner sample
// (common random numbers by default), per-outer-point frozen features.
ReplicateResult run_replicate(const ModelSpec& m, const std::vector<ContrastSpec>& contrasts,
                              const EstimatorConfig& cfg, std::size_t replicate) {
  const std::size_t d = m.dimension();
  const std::size_t n1 = cfg.n1;
  const std::size_t n2 = cfg.paired ? 1 : cfg.n2;
  const std::size_t n_params = contrasts.size();
  const StreamKey outer_key{cfg.seed, 2 * static_cast<std::uint64_t>(replicate)};
  const StreamKey inner_key{cfg.seed, 2 * static_cast<std::uint64_t>(replicate) + 1};

  const std::vector<double> outer = sample_matrix(m, n1, outer_key);
  std::vector<double> outputs(n1);
  for (std::size_t j = 0; j < n1; ++j)
    outputs[j] = m.evaluate(std::span<const double>(outer).subspan(j * d, d));

  // Step 1: unconditional feature and loss per contrast
  std::vector<FeatureValue> theta_star;
  theta_star.reserve(n_params);
  std::vector<std::vector<double>> loss_star(n_params, std::vector<double>(n1));
  std::vector<double> min_mean(n_params, 0.0);
  for (std::size_t p = 0; p < n_params; ++p) {
    theta_star.push_back(empirical_feature(contrasts[p], outputs));
    double min_sum = 0.0;
    for (std::size_t j = 0; j < n1; ++j) {
      loss_star[p][j] = pointwise_loss(contrasts[p], outputs[j], theta_star[p]);
      min_sum += pointwise_min(contrasts[p], outputs[j]);
    }
    min_mean[p] = min_sum / static_cast<double>(n1);
  }

  // Step 2: frozen inner samples
  const std::size_t inner_rows = cfg.paired ? n1 : cfg.n2;
  std::vector<double> inner;
  if (!cfg.fresh_inner) inner = sample_matrix(m, inner_rows, inner_key);

  std::vector<std::size_t> complement;
  for (std::size_t i = 0; i < d; ++i)
    if (std::find(cfg.subset.begin(), cfg.subset.end(), i) == cfg.subset.end())
      complement.push_back(i);

  const bool fast_quantile = n_params > 1 && all_quantile(contrasts);
  const bool fast_excess = n_params > 1 && all_excess(contrasts);

  std::vector<std::vector<double>> diff(n_params, std::vector<double>(n1));
  std::vector<double> paired_outputs(cfg.paired ? n1 : 0);

  parallel_blocks(n1, cfg.threads, [&](std::size_t begin, std::size_t end) {
    std::vector<double> xbuf(d);
    std::vector<double> ysub(n2);
    std::vector<double> sorted;
    for (std::size_t j = begin; j < end; ++j) {
      for (std::size_t idx : cfg.subset) xbuf[idx] = outer[j * d + idx];
      if (cfg.paired) {
        for (std::size_t i : complement) xbuf[i] = inner[j * d + i];
        ysub[0] = m.evaluate(xbuf);
        paired_outputs[j] = ysub[0];
      } else if (cfg.fresh_inner) {
        for (std::size_t l = 0; l < n2; ++l) {
          for (std::size_t i : complement) {
            const std::uint64_t counter =
                (static_cast<std::uint64_t>(j) * n2 + l) * d + i;
            xbuf[i] = draw_marginal(m.marginals()[i], uniform_at(inner_key, counter));
          }
          ysub[l] = m.evaluate(xbuf);
        }
      } else {
        for (std::size_t l = 0; l < n2; ++l) {
          for (std::size_t i : complement) xbuf[i] = inner[l * d + i];
          ysub[l] = m.evaluate(xbuf);
        }
      }

      if (fast_quantile || fast_excess) {
        sorted.assign(ysub.begin(), ysub.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t p = 0; p < n_params; ++p) {
          double feature;
          if (fast_quantile) {
            const double alpha = std::get<QuantileContrast>(contrasts[p]).alpha;
            std::size_t rank =
                static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n2)));
            rank = std::min(std::max<std::size_t>(rank, 1), n2);
            feature = sorted[rank - 1];
          } else {
            const double t = std::get<ExcessProbContrast>(contrasts[p]).threshold;
            const auto it = std::lower_bound(sorted.begin(), sorted.end(), t);
            feature = static_cast<double>(sorted.end() - it) / static_cast<double>(n2);
          }
          diff[p][j] =
              loss_star[p][j] - pointwise_loss(contrasts[p], outputs[j], ScalarFeature{feature});
        }
      } else {
        for (std::size_t p = 0; p < n_params; ++p) {
          const FeatureValue feature = empirical_feature(contrasts[p], ysub);
          diff[p][j] = loss_star[p][j] - pointwise_loss(contrasts[p], outputs[j], feature);
        }
      }
    }
  });

  // fixed summation order (outer index) keeps floating-point determinism
  ReplicateResult res;
  res.numerator.resize(n_params);
  res.denominator.resize(n_params);
  for (std::size_t p = 0; p < n_params; ++p) {
    double num_sum = 0.0, star_sum = 0.0;
    for (std::size_t j = 0; j < n1; ++j) {
      num_sum += diff[p][j];
      star_sum += loss_star[p][j];
    }
    res.numerator[p] = num_sum / static_cast<double>(n1);
    res.denominator[p] = star_sum / static_cast<double>(n1) - min_mean[p];
  }

  // Paired mean contrast: the quadratic loss lets the numerator be written
  // with three variances, 2*Cov(Y, Y') = Var(Y) + Var(Y') - Var(Y - Y'),
  // which matches the pick-freeze cross-moment estimator exactly.
  if (cfg.paired) {
    for (std::size_t p = 0; p < n_params; ++p) {
      if (!std::holds_alternative<MeanContrast>(contrasts[p])) continue;
      const ContrastSpec mean_c = MeanContrast{};
      std::vector<double> delta(n1);
      for (std::size_t j = 0; j < n1; ++j) delta[j] = outputs[j] - paired_outputs[j];
      const double var_y = average_loss(mean_c, outputs, empirical_feature(mean_c, outputs));
      const double var_yp =
          average_loss(mean_c, paired_outputs, empirical_feature(mean_c, paired_outputs));
      const double var_delta = average_loss(mean_c, delta, empirical_feature(mean_c, delta));
      res.numerator[p] = 0.5 * (var_y + var_yp - var_delta);
    }
  }
  return res;
}

std::string subset_string(const std::vector<std::size_t>& subset) {
  std::ostringstream os;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) os << "+";
    os << subset[i] + 1;  // 1-based for messages
  }
  return os.str();
}

}  // namespace

std::vector<SweepPoint> estimate_index_sweep(const ModelSpec& m,
                                             const std::vector<ContrastSpec>& contrasts,
                                             const EstimatorConfig& cfg) {
  if (contrasts.empty()) throw std::invalid_argument("estimate_index_sweep: empty contrast grid");
  validate_config(m, cfg);
  for (const auto& c : contrasts) validate(c);

  const std::size_t n_params = contrasts.size();
  const std::size_t B = cfg.replicates;
  std::vector<std::vector<double>> values(n_params), nums(n_params), dens(n_params);
  std::vector<std::string> errors(n_params);

  for (std::size_t b = 0; b < B; ++b) {
    const ReplicateResult r = run_replicate(m, contrasts, cfg, b);
    for (std::size_t p = 0; p < n_params; ++p) {
      if (!errors[p].empty()) continue;
      if (std::abs(r.denominator[p]) < kDegenerateTol) {
        std::ostringstream os;
        os << "degenerate denominator " << r.denominator[p] << " for contrast "
           << contrast_descriptor(contrasts[p]) << ", subset " << subset_string(cfg.subset)
           << ", replicate " << b;
        errors[p] = os.str();
        continue;
      }
      nums[p].push_back(r.numerator[p]);
      dens[p].push_back(r.denominator[p]);
      values[p].push_back(r.numerator[p] / r.denominator[p]);
    }
  }

  std::vector<SweepPoint> out;
  out.reserve(n_params);
  for (std::size_t p = 0; p < n_params; ++p) {
    SweepPoint pt;
    pt.contrast = contrasts[p];
    if (!errors[p].empty()) {
      pt.degenerate = true;
      pt.error = errors[p];
      out.push_back(std::move(pt));
      continue;
    }
    IndexEstimate est;
    est.config = cfg;
    est.contrast_id = contrast_descriptor(contrasts[p]);
    est.model_id = m.name();
    est.replicate_values = values[p];
    double vsum = 0.0, nsum = 0.0, dsum = 0.0;
    for (std::size_t b = 0; b < B; ++b) {
      vsum += values[p][b];
      nsum += nums[p][b];
      dsum += dens[p][b];
    }
    est.value = vsum / static_cast<double>(B);
    est.numerator = nsum / static_cast<double>(B);
    est.denominator = dsum / static_cast<double>(B);
    if (B > 1) {
      double ss = 0.0;
      for (double v : values[p]) ss += (v - est.value) * (v - est.value);
      est.std_error = std::sqrt(ss / static_cast<double>(B - 1)) / std::sqrt(static_cast<double>(B));
    } else {
      est.std_error = std::nan("");
    }
    est.range_flag = est.value < 0.0 || est.value > 1.0;
    pt.estimate = std::move(est);
    out.push_back(std::move(pt));
  }
  return out;
}

IndexEstimate estimate_index(const ModelSpec& m, const ContrastSpec& c,
                             const EstimatorConfig& cfg) {
  auto points = estimate_index_sweep(m, {c}, cfg);
  if (points.front().degenerate) throw degenerate_error(points.front().error);
  return std::move(points.front().estimate);
}

double pick_freeze_sobol(const ModelSpec& m, std::size_t k, std::size_t N, std::uint64_t seed) {
  if (N < 2) throw std::invalid_argument("pick_freeze_sobol: N must be >= 2");
  if (k >= m.dimension()) throw std::invalid_argument("pick_freeze_sobol: index out of range");
  const std::size_t d = m.dimension();
  const std::vector<double> outer = sample_matrix(m, N, StreamKey{seed, 0});
  const std::vector<double> inner = sample_matrix(m, N, StreamKey{seed, 1});

  std::vector<double> y(N), y_frozen(N), xbuf(d);
  for (std::size_t j = 0; j < N; ++j) {
    y[j] = m.evaluate(std::span<const double>(outer).subspan(j * d, d));
    for (std::size_t i = 0; i < d; ++i) xbuf[i] = inner[j * d + i];
    xbuf[k] = outer[j * d + k];
    y_frozen[j] = m.evaluate(xbuf);
  }
  double my = 0.0, myf = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    my += y[j];
    myf += y_frozen[j];
  }
  my /= static_cast<double>(N);
  myf /= static_cast<double>(N);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    num += (y[j] - my) * (y_frozen[j] - myf);
    den += (y[j] - my) * (y[j] - my);
  }
  num /= static_cast<double>(N);
  den /= static_cast<double>(N);
  if (std::abs(den) < kDegenerateTol)
    throw degenerate_error("pick_freeze_sobol: output variance is zero");
  return num / den;
}

}  // namespace gosa
