#ifndef GOSA_ERRORS_HPP
#define GOSA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gosa {

// Denominator (or another normalizing quantity) is numerically zero, so the
// index is undefined. Distinct from "index approximately zero".
class degenerate_error : public std::runtime_error {
public:
  explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical routine (quadrature, scalar optimizer) failed to reach its
// requested tolerance.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gosa

#endif
