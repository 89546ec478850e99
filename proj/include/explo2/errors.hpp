#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace explo2 {

/// Malformed caller input: non-finite coordinates, inverted bounds, bad sizes.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A similarity or distance matrix that could not be factorized or inverted.
///
/// `pivot()` is the zero-based index of the first non-positive pivot met by the
/// Cholesky factorization, or npos when the failure is not pivot-related.
/// `scale()` is the scale parameter in effect (0 when not applicable).
class DegenerateGeometryError : public std::runtime_error {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  DegenerateGeometryError(const std::string& what, std::size_t pivot = npos, double scale = 0.0)
      : std::runtime_error(what), pivot_(pivot), scale_(scale) {}

  std::size_t pivot() const noexcept { return pivot_; }
  double scale() const noexcept { return scale_; }

 private:
  std::size_t pivot_;
  double scale_;
};

/// Arithmetic that contradicts positive definiteness (e.g. a clearly negative Schur complement).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace explo2
