#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "clocklab/core/grid.hpp"

namespace clocklab {

using Complex = std::complex<double>;

struct ComplexField1D {
  UniformGrid grid;
  std::vector<Complex> values;

  ComplexField1D() = default;
  explicit ComplexField1D(UniformGrid g) : grid(g), values(g.size()) {}
  ComplexField1D(UniformGrid g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
      throw Error(Errc::configuration, "field length does not match grid size");
    }
  }

  template <class F>
  static ComplexField1D sample(UniformGrid g, F&& f) {
    ComplexField1D out(g);
    for (std::size_t k = 0; k < g.size(); ++k) out.values[k] = f(g.node(k));
    return out;
  }

  std::size_t size() const { return values.size(); }
};

/// Row-major 2D field: value (i0, i1) lives at i0 * axis1.size() + i1.
struct ComplexField2D {
  UniformGrid axis0;
  UniformGrid axis1;
  std::vector<Complex> values;

  ComplexField2D() = default;
  ComplexField2D(UniformGrid a0, UniformGrid a1)
      : axis0(a0), axis1(a1), values(a0.size() * a1.size()) {}
  ComplexField2D(UniformGrid a0, UniformGrid a1, std::vector<Complex> v)
      : axis0(a0), axis1(a1), values(std::move(v)) {
    if (values.size() != axis0.size() * axis1.size()) {
      throw Error(Errc::configuration, "field length does not match grid sizes");
    }
  }

  Complex& operator()(std::size_t i0, std::size_t i1) { return values[i0 * axis1.size() + i1]; }
  const Complex& operator()(std::size_t i0, std::size_t i1) const {
    return values[i0 * axis1.size() + i1];
  }

  std::size_t size() const { return values.size(); }
};

inline double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::norm(z));
  return std::sqrt(m);
}

/// max |boundary value| / max |value|; 0 for an all-zero field.
inline double boundary_ratio(const ComplexField1D& f) {
  const double peak = max_abs(f.values);
  if (peak == 0.0) return 0.0;
  return std::max(std::abs(f.values.front()), std::abs(f.values.back())) / peak;
}

/// Boundary ratio of a 2D field measured on the two faces orthogonal to `axis`.
inline double boundary_ratio(const ComplexField2D& f, int axis) {
  const double peak = max_abs(f.values);
  if (peak == 0.0) return 0.0;
  const std::size_t n0 = f.axis0.size();
  const std::size_t n1 = f.axis1.size();
  double edge = 0.0;
  if (axis == 0) {
    for (std::size_t j = 0; j < n1; ++j) {
      edge = std::max({edge, std::abs(f(0, j)), std::abs(f(n0 - 1, j))});
    }
  } else {
    for (std::size_t i = 0; i < n0; ++i) {
      edge = std::max({edge, std::abs(f(i, 0)), std::abs(f(i, n1 - 1))});
    }
  }
  return edge / peak;
}

inline double boundary_ratio(const ComplexField2D& f) {
  return std::max(boundary_ratio(f, 0), boundary_ratio(f, 1));
}

}  // namespace clocklab
