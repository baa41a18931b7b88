#ifndef GOSA_MODEL_HPP
#define GOSA_MODEL_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gosa {

struct Uniform {
  double lo, hi;
};
struct Exponential {
  double rate;
};
// Distributed as the negative of an independent Exponential(rate) draw.
struct NegatedExponential {
  double rate;
};
struct Normal {
  double mean, sd;
};
using MarginalSpec = std::variant<Uniform, Exponential, NegatedExponential, Normal>;

void validate(const MarginalSpec& m);

// Black-box model Y = h(X_1, ..., X_d) with independent input marginals.
// Evaluators are pure; a ModelSpec is immutable after construction.
class ModelSpec {
public:
  using Evaluator = std::function<double(std::span<const double>)>;

  ModelSpec(std::string name, std::vector<MarginalSpec> marginals, Evaluator evaluator);

  const std::string& name() const { return name_; }
  std::size_t dimension() const { return marginals_.size(); }
  const std::vector<MarginalSpec>& marginals() const { return marginals_; }

  double evaluate(std::span<const double> x) const;

  // Model of dimension d - |indices| with the given coordinates (0-based,
  // distinct) pinned to `pinned`. Remaining inputs keep their order.
  ModelSpec freeze(const std::vector<std::size_t>& indices, std::span<const double> pinned) const;

private:
  std::string name_;
  std::vector<MarginalSpec> marginals_;
  Evaluator evaluator_;
};

// Built-ins from the worked examples.
ModelSpec example1_model();                    // X1 + X2, Exp(1) + NegatedExponential(1)
ModelSpec example2_model(double a);            // X1 + X2, Exp(1) + Exp(a)
ModelSpec gaussian_linear_model(double theta); // theta*X1 + X2, N(0,1) x N(0,1)
ModelSpec ishigami_model();                    // sin x1 + 7 sin^2 x2 + 0.1 x3^4 sin x1
// Same output as `base` with one extra, unused Uniform(0,1) input appended.
ModelSpec dummy_augmented_model(ModelSpec base);

}  // namespace gosa

#endif
