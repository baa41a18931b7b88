#ifndef GOSA_GRID_HPP
#define GOSA_GRID_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace gosa {

// Strictly increasing quadrature grid with at least two nodes.
// Integrals over a grid use the trapezoid rule; anything beyond the last
// node is truncated (the truncation is part of the discretized contrast).
class Grid {
public:
  explicit Grid(std::vector<double> nodes) : nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw std::invalid_argument("Grid: need at least 2 nodes");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (!(nodes_[i] > nodes_[i - 1]))
        throw std::invalid_argument("Grid: nodes must be strictly increasing");
  }

  static Grid linspace(double lo, double hi, std::size_t count) {
    if (count < 2) throw std::invalid_argument("Grid::linspace: count < 2");
    if (!(lo < hi)) throw std::invalid_argument("Grid::linspace: lo >= hi");
    std::vector<double> n(count);
    for (std::size_t i = 0; i < count; ++i)
      n[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    n.back() = hi;
    return Grid(std::move(n));
  }

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }

  // Trapezoid rule for values sampled at the grid nodes.
  double trapezoid(std::span<const double> values) const {
    if (values.size() != nodes_.size())
      throw std::invalid_argument("Grid::trapezoid: value count != node count");
    double acc = 0.0;
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      acc += 0.5 * (values[i] + values[i - 1]) * (nodes_[i] - nodes_[i - 1]);
    return acc;
  }

  template <class F>
  double trapezoid(F&& f) const {
    double acc = 0.0;
    double prev = f(nodes_[0]);
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      const double cur = f(nodes_[i]);
      acc += 0.5 * (cur + prev) * (nodes_[i] - nodes_[i - 1]);
      prev = cur;
    }
    return acc;
  }

  bool operator==(const Grid& other) const { return nodes_ == other.nodes_; }

private:
  std::vector<double> nodes_;
};

}  // namespace gosa

#endif
