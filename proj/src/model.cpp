#include "gosa/model.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace gosa {

void validate(const MarginalSpec& m) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Uniform>) {
          if (!(v.lo < v.hi)) throw std::invalid_argument("Uniform: lo must be < hi");
        } else if constexpr (std::is_same_v<T, Exponential> ||
                             std::is_same_v<T, NegatedExponential>) {
          if (!(v.rate > 0.0)) throw std::invalid_argument("Exponential: rate must be > 0");
        } else {
          if (!(v.sd > 0.0)) throw std::invalid_argument("Normal: sd must be > 0");
        }
      },
      m);
}

ModelSpec::ModelSpec(std::string name, std::vector<MarginalSpec> marginals, Evaluator evaluator)
    : name_(std::move(name)), marginals_(std::move(marginals)), evaluator_(std::move(evaluator)) {
  if (marginals_.empty()) throw std::invalid_argument("ModelSpec: at least one input required");
  if (!evaluator_) throw std::invalid_argument("ModelSpec: missing evaluator");
  for (const auto& m : marginals_) validate(m);
}

double ModelSpec::evaluate(std::span<const double> x) const {
  if (x.size() != marginals_.size())
    throw std::invalid_argument("ModelSpec::evaluate: dimension mismatch");
  return evaluator_(x);
}

ModelSpec ModelSpec::freeze(const std::vector<std::size_t>& indices,
                            std::span<const double> pinned) const {
  if (indices.empty()) throw std::invalid_argument("ModelSpec::freeze: empty index set");
  if (indices.size() != pinned.size())
    throw std::invalid_argument("ModelSpec::freeze: index/value count mismatch");
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("ModelSpec::freeze: duplicate index");
  if (sorted.back() >= dimension())
    throw std::invalid_argument("ModelSpec::freeze: index out of range");
  if (indices.size() == dimension()) {
    // all coordinates pinned: keep a single dummy input so the model stays
    // well formed, and ignore it
    std::vector<double> full(pinned.begin(), pinned.end());
    std::vector<double> ordered(dimension());
    for (std::size_t i = 0; i < indices.size(); ++i) ordered[indices[i]] = full[i];
    const double value = evaluator_(ordered);
    return ModelSpec(name_ + "[const]", {MarginalSpec{Uniform{0.0, 1.0}}},
                     [value](std::span<const double>) { return value; });
  }

  std::vector<MarginalSpec> remaining;
  std::vector<std::size_t> free_positions;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (!std::binary_search(sorted.begin(), sorted.end(), i)) {
      remaining.push_back(marginals_[i]);
      free_positions.push_back(i);
    }
  }
  auto pins = std::make_shared<std::vector<std::pair<std::size_t, double>>>();
  for (std::size_t i = 0; i < indices.size(); ++i) pins->emplace_back(indices[i], pinned[i]);
  const std::size_t d = dimension();
  Evaluator base = evaluator_;
  auto free_pos = std::make_shared<std::vector<std::size_t>>(std::move(free_positions));
  Evaluator frozen = [base, pins, free_pos, d](std::span<const double> x) {
    std::vector<double> full(d);
    for (std::size_t i = 0; i < x.size(); ++i) full[(*free_pos)[i]] = x[i];
    for (const auto& [idx, value] : *pins) full[idx] = value;
    return base(full);
  };
  return ModelSpec(name_ + "[frozen]", std::move(remaining), std::move(frozen));
}

ModelSpec example1_model() {
  return ModelSpec("example1", {Exponential{1.0}, NegatedExponential{1.0}},
                   [](std::span<const double> x) { return x[0] + x[1]; });
}

ModelSpec example2_model(double a) {
  if (!(a > 0.0)) throw std::invalid_argument("example2_model: a must be > 0");
  return ModelSpec("example2", {Exponential{1.0}, Exponential{a}},
                   [](std::span<const double> x) { return x[0] + x[1]; });
}

ModelSpec gaussian_linear_model(double theta) {
  return ModelSpec("gaussian_linear", {Normal{0.0, 1.0}, Normal{0.0, 1.0}},
                   [theta](std::span<const double> x) { return theta * x[0] + x[1]; });
}

ModelSpec ishigami_model() {
  const double pi = std::numbers::pi;
  return ModelSpec("ishigami", {Uniform{-pi, pi}, Uniform{-pi, pi}, Uniform{-pi, pi}},
                   [](std::span<const double> x) {
                     const double s1 = std::sin(x[0]);
                     const double s2 = std::sin(x[1]);
                     return s1 + 7.0 * s2 * s2 + 0.1 * x[2] * x[2] * x[2] * x[2] * s1;
                   });
}

ModelSpec dummy_augmented_model(ModelSpec base) {
  const std::size_t d = base.dimension();
  std::vector<MarginalSpec> marginals = base.marginals();
  marginals.push_back(Uniform{0.0, 1.0});
  auto inner = std::make_shared<ModelSpec>(std::move(base));
  return ModelSpec(inner->name() + "+dummy", std::move(marginals),
                   [inner, d](std::span<const double> x) { return inner->evaluate(x.first(d)); });
}

}  // namespace gosa
