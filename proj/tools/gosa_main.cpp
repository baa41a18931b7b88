// Command-line front end: estimate contrast-based sensitivity indices,
// print the closed-form oracle values, or compare the two side by side.
// Output is CSV (long format, one row per estimated index).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gosa/csv.hpp"
#include "gosa/errors.hpp"
#include "gosa/estimator.hpp"
#include "gosa/model.hpp"
#include "gosa/oracles.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitNumerical = 3;

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model;
  double a = 1.0;
  double theta = 1.0;
  bool dummy = false;

  std::string contrast;
  double alpha = 0.5;
  std::string alpha_grid;  // lo:hi:count
  double t = 1.0;
  std::string t_grid;
  double bandwidth = 0.0;
  std::string grid_spec;  // functional-contrast discretization, lo:hi:count
  std::size_t order = 8;
  std::string support;  // lo:hi
  std::string theta_domain = "0:8";
  bool constrained_min = false;

  std::vector<std::string> subsets;
  std::size_t n1 = 1000;
  std::size_t n2 = 1000;
  std::uint64_t seed = 0;
  std::size_t replicates = 10;
  bool paired = false;
  bool fresh_inner = false;
  bool strict = false;
  unsigned threads = 1;
  std::string out;

  // oracle subcommand
  int example = 0;
  bool gaussian_ml = false;
  bool ishigami = false;
};

std::vector<double> parse_grid(const std::string& spec, const char* flag) {
  double lo, hi;
  std::size_t count;
  char c1, c2;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || !is.eof())
    throw usage_error(std::string(flag) + ": expected lo:hi:count, got '" + spec + "'");
  if (count < 1) throw usage_error(std::string(flag) + ": count must be >= 1");
  if (count == 1) {
    if (lo != hi) throw usage_error(std::string(flag) + ": count 1 requires lo == hi");
    return {lo};
  }
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  g.back() = hi;
  return g;
}

std::pair<double, double> parse_interval(const std::string& spec, const char* flag) {
  double lo, hi;
  char c1;
  std::istringstream is(spec);
  if (!(is >> lo >> c1 >> hi) || c1 != ':' || !is.eof())
    throw usage_error(std::string(flag) + ": expected lo:hi, got '" + spec + "'");
  if (!(lo < hi)) throw usage_error(std::string(flag) + ": lo must be < hi");
  return {lo, hi};
}

gosa::ModelSpec build_model(const Options& o) {
  gosa::ModelSpec m = [&]() -> gosa::ModelSpec {
    if (o.model == "example1") return gosa::example1_model();
    if (o.model == "example2") return gosa::example2_model(o.a);
    if (o.model == "gaussian-linear") return gosa::gaussian_linear_model(o.theta);
    if (o.model == "ishigami") return gosa::ishigami_model();
    throw usage_error("unknown model '" + o.model +
                      "'; valid: example1, example2, gaussian-linear, ishigami");
  }();
  if (o.dummy) m = gosa::dummy_augmented_model(std::move(m));
  return m;
}

// One ContrastSpec per sweep point (a single point when no grid was given).
std::vector<gosa::ContrastSpec> build_contrasts(const Options& o) {
  const auto need_grid_spec = [&]() {
    if (o.grid_spec.empty())
      throw usage_error("contrast '" + o.contrast + "' requires --grid-spec lo:hi:count");
    auto nodes = parse_grid(o.grid_spec, "--grid-spec");
    if (nodes.size() < 2) throw usage_error("--grid-spec: need at least 2 nodes");
    return gosa::Grid(std::move(nodes));
  };
  if (o.contrast == "mean") return {gosa::MeanContrast{}};
  if (o.contrast == "median") return {gosa::MedianContrast{}};
  if (o.contrast == "quantile") {
    std::vector<double> alphas = o.alpha_grid.empty() ? std::vector<double>{o.alpha}
                                                      : parse_grid(o.alpha_grid, "--alpha-grid");
    std::vector<gosa::ContrastSpec> cs;
    for (double a : alphas) cs.push_back(gosa::QuantileContrast{a});
    return cs;
  }
  if (o.contrast == "excess") {
    std::vector<double> ts =
        o.t_grid.empty() ? std::vector<double>{o.t} : parse_grid(o.t_grid, "--t-grid");
    std::vector<gosa::ContrastSpec> cs;
    for (double t : ts) cs.push_back(gosa::ExcessProbContrast{t});
    return cs;
  }
  if (o.contrast == "prob-tail") return {gosa::ProbTailContrast{need_grid_spec()}};
  if (o.contrast == "quantile-tail") return {gosa::QuantileTailContrast{need_grid_spec()}};
  if (o.contrast == "kernel-density") {
    if (!(o.bandwidth > 0.0)) throw usage_error("kernel-density requires --bandwidth > 0");
    return {gosa::KernelDensityContrast{o.bandwidth, need_grid_spec()}};
  }
  if (o.contrast == "basis-density") {
    if (o.support.empty()) throw usage_error("basis-density requires --support lo:hi");
    auto [lo, hi] = parse_interval(o.support, "--support");
    return {gosa::BasisDensityContrast{o.order, lo, hi}};
  }
  if (o.contrast == "max-likelihood") {
    auto [lo, hi] = parse_interval(o.theta_domain, "--theta-domain");
    gosa::MaxLikelihoodContrast ml{gosa::gaussian_linear_family(lo, hi), o.constrained_min};
    return {ml};
  }
  throw usage_error("unknown contrast '" + o.contrast +
                    "'; valid: mean, median, quantile, excess, prob-tail, quantile-tail, "
                    "kernel-density, basis-density, max-likelihood");
}

// "1" or "1,3" (1-based) -> 0-based index set
std::vector<std::size_t> parse_subset(const std::string& s, std::size_t dim) {
  std::vector<std::size_t> subset;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    std::size_t pos = 0;
    long v = 0;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || v < 1 || static_cast<std::size_t>(v) > dim)
      throw usage_error("--subset: bad index '" + tok + "' (model has " + std::to_string(dim) +
                        " inputs, 1-based)");
    subset.push_back(static_cast<std::size_t>(v - 1));
  }
  if (subset.empty()) throw usage_error("--subset: empty subset");
  return subset;
}

std::string subset_label(const std::vector<std::size_t>& subset) {
  std::string s;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(subset[i] + 1);
  }
  return s;
}

std::string mode_label(const Options& o) {
  if (o.paired) return "paired";
  if (o.fresh_inner) return "fresh_inner";
  return "shared_inner";
}

const std::vector<std::string> kBaseHeader = {
    "run_id", "model",    "contrast", "param",       "subset",          "n1",
    "n2",     "seed",     "B",        "mode",        "estimate",        "stderr",
    "numerator", "denominator", "degenerate_flag", "range_flag"};

struct OutputSink {
  std::ofstream file;
  std::ostream* os = &std::cout;
  explicit OutputSink(const std::string& path) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw usage_error("cannot open output file '" + path + "'");
      os = &file;
    }
  }
};

// Oracle value for (model, contrast, single-variable subset, parameter).
// Returns nothing when no closed form exists for the pair.
std::optional<double> oracle_value(const Options& o, const gosa::ContrastSpec& c,
                                   const std::vector<std::size_t>& subset) {
  if (subset.size() != 1) return std::nullopt;
  const std::size_t k = subset[0];
  const std::string cname = gosa::contrast_name(c);
  if (o.model == "example1" && cname == "quantile" && k < 2) {
    const auto r = gosa::oracles::example1_indices(std::get<gosa::QuantileContrast>(c).alpha);
    return k == 0 ? r.s1 : r.s2;
  }
  if (o.model == "example2" && cname == "excess" && k < 2) {
    const auto r =
        gosa::oracles::example2_components(o.a, std::get<gosa::ExcessProbContrast>(c).threshold);
    return k == 0 ? r.s1 : r.s2;
  }
  if (o.model == "example2" && cname == "mean" && k < 2) {
    return k == 0 ? o.a * o.a / (1.0 + o.a * o.a) : 1.0 / (1.0 + o.a * o.a);
  }
  if (o.model == "gaussian-linear" && cname == "max_likelihood" && k < 2) {
    const auto r = gosa::oracles::gaussian_ml_indices(o.theta);
    return k == 0 ? r.s1 : r.s2;
  }
  if (o.model == "gaussian-linear" && cname == "mean" && k < 2) {
    const double t2 = o.theta * o.theta;
    return k == 0 ? t2 / (1.0 + t2) : 1.0 / (1.0 + t2);
  }
  if (o.model == "ishigami" && cname == "mean" && k < 3) {
    const auto r = gosa::oracles::ishigami_sobol();
    return k == 0 ? r.s1 : (k == 1 ? r.s2 : r.s3);
  }
  return std::nullopt;
}

const char* kComparePairs =
    "supported model/contrast pairs for compare: example1+quantile, example2+excess, "
    "example2+mean, gaussian-linear+max-likelihood, gaussian-linear+mean, ishigami+mean "
    "(single-variable subsets)";

int run_estimate(const Options& o, bool compare_mode) {
  const gosa::ModelSpec model = build_model(o);
  const std::vector<gosa::ContrastSpec> contrasts = build_contrasts(o);

  std::vector<std::vector<std::size_t>> subsets;
  if (o.subsets.empty()) {
    for (std::size_t i = 0; i < model.dimension(); ++i) subsets.push_back({i});
  } else {
    for (const auto& s : o.subsets) subsets.push_back(parse_subset(s, model.dimension()));
  }

  if (compare_mode) {
    for (const auto& subset : subsets)
      if (!oracle_value(o, contrasts.front(), subset))
        throw usage_error(std::string("no oracle for this configuration; ") + kComparePairs);
  }

  // one sweep per subset; rows are emitted sorted by (contrast param, subset)
  std::vector<std::vector<gosa::SweepPoint>> results;
  for (const auto& subset : subsets) {
    gosa::EstimatorConfig cfg;
    cfg.n1 = o.n1;
    cfg.n2 = o.n2;
    cfg.seed = o.seed;
    cfg.subset = subset;
    cfg.replicates = o.replicates;
    cfg.paired = o.paired;
    cfg.fresh_inner = o.fresh_inner;
    cfg.threads = o.threads;
    results.push_back(gosa::estimate_index_sweep(model, contrasts, cfg));
  }

  OutputSink sink(o.out);
  std::vector<std::string> header = kBaseHeader;
  if (compare_mode) {
    header.push_back("oracle");
    header.push_back("abs_error");
    header.push_back("z_score");
  }
  gosa::csv::write_row(*sink.os, header);

  bool any_degenerate = false;
  std::size_t row_index = 0;
  for (std::size_t p = 0; p < contrasts.size(); ++p) {
    for (std::size_t s = 0; s < subsets.size(); ++s) {
      const gosa::SweepPoint& pt = results[s][p];
      const double param = gosa::contrast_parameter(contrasts[p]);
      std::vector<std::string> row;
      std::ostringstream run_id;
      run_id << model.name() << "-" << gosa::contrast_name(contrasts[p]) << "-s" << o.seed << "-"
             << row_index++;
      row.push_back(run_id.str());
      row.push_back(model.name());
      row.push_back(gosa::contrast_descriptor(contrasts[p]));
      row.push_back(std::isnan(param) ? "" : gosa::csv::format_double(param));
      row.push_back(subset_label(subsets[s]));
      row.push_back(std::to_string(o.n1));
      row.push_back(std::to_string(o.n2));
      row.push_back(std::to_string(o.seed));
      row.push_back(std::to_string(o.replicates));
      row.push_back(mode_label(o));
      if (pt.degenerate) {
        any_degenerate = true;
        row.insert(row.end(), {"", "", "", "", "1", "0"});
        if (compare_mode) row.insert(row.end(), {"", "", ""});
      } else {
        const gosa::IndexEstimate& e = pt.estimate;
        row.push_back(gosa::csv::format_double(e.value));
        row.push_back(gosa::csv::format_double(e.std_error));
        row.push_back(gosa::csv::format_double(e.numerator));
        row.push_back(gosa::csv::format_double(e.denominator));
        row.push_back("0");
        row.push_back(e.range_flag ? "1" : "0");
        if (compare_mode) {
          const auto oracle = oracle_value(o, contrasts[p], subsets[s]);
          if (oracle) {
            row.push_back(gosa::csv::format_double(*oracle));
            row.push_back(gosa::csv::format_double(std::abs(e.value - *oracle)));
            row.push_back(gosa::csv::format_double((e.value - *oracle) / e.std_error));
          } else {
            row.insert(row.end(), {"", "", ""});
          }
        }
      }
      gosa::csv::write_row(*sink.os, row);
    }
  }
  sink.os->flush();
  return (any_degenerate && o.strict) ? kExitDegenerate : kExitOk;
}

int run_oracle(const Options& o) {
  struct Row {
    std::string model, contrast;
    double param;
    std::string subset;
    double value, denominator;
  };
  std::vector<Row> rows;

  if (o.example == 1) {
    const auto alphas = o.alpha_grid.empty() ? std::vector<double>{o.alpha}
                                             : parse_grid(o.alpha_grid, "--alpha-grid");
    for (double a : alphas) {
      const auto r = gosa::oracles::example1_indices(a);
      const double den = r.auxiliary.at("min_psi");
      rows.push_back({"example1", "quantile", a, "1", r.s1, den});
      rows.push_back({"example1", "quantile", a, "2", r.s2, den});
    }
  } else if (o.example == 2) {
    const auto ts =
        o.t_grid.empty() ? std::vector<double>{o.t} : parse_grid(o.t_grid, "--t-grid");
    for (double t : ts) {
      const auto r = gosa::oracles::example2_components(o.a, t);
      const double den = r.auxiliary.at("denominator");
      rows.push_back({"example2", "excess", t, "1", r.s1, den});
      rows.push_back({"example2", "excess", t, "2", r.s2, den});
    }
  } else if (o.gaussian_ml) {
    const auto r = gosa::oracles::gaussian_ml_indices(o.theta);
    const double den = r.auxiliary.at("denominator");
    rows.push_back({"gaussian-linear", "max_likelihood", o.theta, "1", r.s1, den});
    rows.push_back({"gaussian-linear", "max_likelihood", o.theta, "2", r.s2, den});
  } else if (o.ishigami) {
    const auto r = gosa::oracles::ishigami_sobol();
    rows.push_back({"ishigami", "mean", std::nan(""), "1", r.s1, std::nan("")});
    rows.push_back({"ishigami", "mean", std::nan(""), "2", r.s2, std::nan("")});
    rows.push_back({"ishigami", "mean", std::nan(""), "3", r.s3, std::nan("")});
  } else {
    throw usage_error("oracle: select one of --example 1, --example 2, --gaussian-ml, --ishigami");
  }

  OutputSink sink(o.out);
  gosa::csv::write_row(*sink.os, kBaseHeader);
  std::size_t row_index = 0;
  for (const auto& r : rows) {
    std::vector<std::string> row;
    std::ostringstream run_id;
    run_id << r.model << "-" << r.contrast << "-oracle-" << row_index++;
    row.push_back(run_id.str());
    row.push_back(r.model);
    row.push_back(r.contrast);
    row.push_back(std::isnan(r.param) ? "" : gosa::csv::format_double(r.param));
    row.push_back(r.subset);
    row.insert(row.end(), {"", "", "", "", "analytic"});
    row.push_back(gosa::csv::format_double(r.value));
    row.push_back("0");
    const bool have_den = !std::isnan(r.denominator);
    row.push_back(have_den ? gosa::csv::format_double(r.value * r.denominator) : "");
    row.push_back(have_den ? gosa::csv::format_double(r.denominator) : "");
    row.push_back("0");
    row.push_back((r.value < 0.0 || r.value > 1.0) ? "1" : "0");
    gosa::csv::write_row(*sink.os, row);
  }
  sink.os->flush();
  return kExitOk;
}

void add_model_contrast_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model,
                  "model name: example1, example2, gaussian-linear, ishigami")
      ->required();
  cmd->add_option("--a", o.a, "rate of the second exponential input (example2)");
  cmd->add_option("--theta", o.theta, "slope of the first input (gaussian-linear)");
  cmd->add_flag("--dummy", o.dummy, "append one unused Uniform(0,1) input");
  cmd->add_option("--contrast", o.contrast,
                  "contrast: mean, median, quantile, excess, prob-tail, quantile-tail, "
                  "kernel-density, basis-density, max-likelihood")
      ->required();
  cmd->add_option("--alpha", o.alpha, "quantile level in (0,1)");
  cmd->add_option("--alpha-grid", o.alpha_grid, "quantile level sweep, lo:hi:count");
  cmd->add_option("--t", o.t, "excess-probability threshold");
  cmd->add_option("--t-grid", o.t_grid, "threshold sweep, lo:hi:count");
  cmd->add_option("--bandwidth", o.bandwidth, "kernel-density window size r > 0");
  cmd->add_option("--grid-spec", o.grid_spec,
                  "discretization grid for functional contrasts, lo:hi:count");
  cmd->add_option("--order", o.order, "basis-density truncation order N");
  cmd->add_option("--support", o.support, "basis-density support interval, lo:hi");
  cmd->add_option("--theta-domain", o.theta_domain, "max-likelihood theta domain, lo:hi");
  cmd->add_flag("--constrained-min", o.constrained_min,
                "use the constrained per-sample minimum for max-likelihood");
}

void add_estimator_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--subset", o.subsets,
                  "variable subset, 1-based, comma-joined for higher order (repeatable; "
                  "default: every single variable)");
  cmd->add_option("--n1", o.n1, "outer sample size");
  cmd->add_option("--n2", o.n2, "inner sample size");
  cmd->add_option("--seed", o.seed, "random seed");
  cmd->add_option("--replicates", o.replicates, "replicate count B for the standard error");
  cmd->add_flag("--paired", o.paired, "paired pick-freeze mode (requires n1 == n2)");
  cmd->add_flag("--fresh-inner", o.fresh_inner, "redraw the inner sample per outer point");
  cmd->add_flag("--strict", o.strict, "exit 2 when any row is degenerate");
  cmd->add_option("--threads", o.threads, "outer-loop workers (output is identical for any count)");
  cmd->add_option("--out", o.out, "output CSV path (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"goal-oriented sensitivity indices (contrast-based generalization of Sobol indices)"};
  app.require_subcommand(1);
  app.set_config("--config", "", "plain key=value config file; flags override it");

  Options opt;

  CLI::App* estimate = app.add_subcommand("estimate", "Monte-Carlo index estimates as CSV");
  add_model_contrast_options(estimate, opt);
  add_estimator_options(estimate, opt);

  CLI::App* oracle = app.add_subcommand("oracle", "closed-form index values as CSV");
  oracle->add_option("--example", opt.example, "worked example number (1 or 2)");
  oracle->add_option("--alpha", opt.alpha, "quantile level (example 1)");
  oracle->add_option("--alpha-grid", opt.alpha_grid, "quantile level sweep, lo:hi:count");
  oracle->add_option("--a", opt.a, "second exponential rate (example 2)");
  oracle->add_option("--t", opt.t, "threshold (example 2)");
  oracle->add_option("--t-grid", opt.t_grid, "threshold sweep, lo:hi:count");
  oracle->add_flag("--gaussian-ml", opt.gaussian_ml, "Gaussian linear maximum-likelihood indices");
  oracle->add_option("--theta", opt.theta, "slope for --gaussian-ml");
  oracle->add_flag("--ishigami", opt.ishigami, "Ishigami Sobol constants");
  oracle->add_option("--out", opt.out, "output CSV path (default: stdout)");

  CLI::App* compare = app.add_subcommand("compare", "estimates joined with oracle values");
  add_model_contrast_options(compare, opt);
  add_estimator_options(compare, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (estimate->parsed()) return run_estimate(opt, /*compare_mode=*/false);
    if (compare->parsed()) return run_estimate(opt, /*compare_mode=*/true);
    return run_oracle(opt);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gosa::degenerate_error& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const gosa::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
