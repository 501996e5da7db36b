#pragma once

#include <complex>

#include "clocklab/core/field.hpp"

namespace clocklab {

// Uniform-grid rectangle rule. On periodic data whose boundary values have
// decayed this coincides with the trapezoid rule.

inline double trapezoid_norm_squared(const ComplexField1D& f) {
  double sum = 0.0;
  for (const auto& z : f.values) sum += std::norm(z);
  return sum * f.grid.step();
}

inline double trapezoid_norm_squared(const ComplexField2D& f) {
  double sum = 0.0;
  for (const auto& z : f.values) sum += std::norm(z);
  return sum * f.axis0.step() * f.axis1.step();
}

/// <a|b> with the grid measure.
inline Complex inner_product(const ComplexField2D& a, const ComplexField2D& b) {
  Complex sum{};
  for (std::size_t k = 0; k < a.values.size(); ++k) sum += std::conj(a.values[k]) * b.values[k];
  return sum * (a.axis0.step() * a.axis1.step());
}

inline Complex inner_product(const ComplexField1D& a, const ComplexField1D& b) {
  Complex sum{};
  for (std::size_t k = 0; k < a.values.size(); ++k) sum += std::conj(a.values[k]) * b.values[k];
  return sum * a.grid.step();
}

}  // namespace clocklab
