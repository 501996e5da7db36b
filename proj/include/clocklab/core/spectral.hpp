#pragma once

#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "clocklab/core/field.hpp"

namespace clocklab {

enum class HealthPolicy { ignore, warn, strict };

inline constexpr double kBandLimitThreshold = 1e-10;

/// Unnormalized forward DFT; dft_inverse(dft_forward(x)) == x.
inline std::vector<Complex> dft_forward(const std::vector<Complex>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.fwd(out, in);
  return out;
}

inline std::vector<Complex> dft_inverse(const std::vector<Complex>& in) {
  Eigen::FFT<double> fft;
  std::vector<Complex> out;
  fft.inv(out, in);
  return out;
}

/// Angular wavenumber of DFT bin m on a grid of n points and spacing `step`.
/// The Nyquist bin maps to zero so the derivative operator stays Hermitian.
inline double angular_wavenumber(std::size_t m, std::size_t n, double step) {
  if (2 * m == n) return 0.0;
  const double freq = (2 * m < n) ? static_cast<double>(m)
                                  : static_cast<double>(m) - static_cast<double>(n);
  return 2.0 * std::numbers::pi * freq / (static_cast<double>(n) * step);
}

struct SpectrumExtent {
  double peak = 0.0;
  double tail = 0.0;  // largest magnitude in the outer quarter of the band

  void merge(const SpectrumExtent& o) {
    peak = std::max(peak, o.peak);
    tail = std::max(tail, o.tail);
  }
  double ratio() const { return peak == 0.0 ? 0.0 : tail / peak; }
};

inline SpectrumExtent spectrum_extent(const std::vector<Complex>& spectrum) {
  const std::size_t n = spectrum.size();
  SpectrumExtent e;
  for (std::size_t m = 0; m < n; ++m) {
    const double a = std::norm(spectrum[m]);
    e.peak = std::max(e.peak, a);
    const std::size_t dist = std::min(m, n - m);
    if (8 * dist >= 3 * n) e.tail = std::max(e.tail, a);
  }
  e.peak = std::sqrt(e.peak);
  e.tail = std::sqrt(e.tail);
  return e;
}

namespace detail {

inline void report_health(double ratio, const char* what, HealthPolicy policy) {
  if (policy == HealthPolicy::ignore || ratio < kBandLimitThreshold) return;
  std::ostringstream msg;
  msg << what << " ratio " << ratio << " exceeds " << kBandLimitThreshold;
  if (policy == HealthPolicy::strict) throw Error(Errc::aliasing, msg.str());
  std::clog << "clocklab warning: " << msg.str() << '\n';
}

// Differentiates one line in place; returns the spectrum extent seen.
inline SpectrumExtent differentiate_line(Eigen::FFT<double>& fft, std::vector<Complex>& line,
                                 std::vector<Complex>& work, double step) {
  fft.fwd(work, line);
  const SpectrumExtent extent = spectrum_extent(work);
  const std::size_t n = work.size();
  for (std::size_t m = 0; m < n; ++m) {
    work[m] *= Complex(0.0, angular_wavenumber(m, n, step));
  }
  fft.inv(line, work);
  return extent;
}

}  // namespace detail

/// DFT-based derivative of a periodic, band-limited sample sequence.
inline ComplexField1D spectral_derivative(const ComplexField1D& field,
                                          HealthPolicy policy = HealthPolicy::warn) {
  detail::report_health(boundary_ratio(field), "boundary amplitude", policy);
  Eigen::FFT<double> fft;
  ComplexField1D out = field;
  std::vector<Complex> work;
  const auto extent = detail::differentiate_line(fft, out.values, work, field.grid.step());
  detail::report_health(extent.ratio(), "spectral tail", policy);
  return out;
}

/// Derivative along one axis of a 2D field.
inline ComplexField2D spectral_derivative(const ComplexField2D& field, int axis,
                                          HealthPolicy policy = HealthPolicy::warn) {
  detail::report_health(boundary_ratio(field, axis), "boundary amplitude", policy);
  const std::size_t n0 = field.axis0.size();
  const std::size_t n1 = field.axis1.size();
  ComplexField2D out = field;
  Eigen::FFT<double> fft;
  std::vector<Complex> line;
  std::vector<Complex> work;
  SpectrumExtent extent;
  if (axis == 1) {
    line.resize(n1);
    for (std::size_t i = 0; i < n0; ++i) {
      std::copy_n(field.values.begin() + static_cast<std::ptrdiff_t>(i * n1), n1, line.begin());
      extent.merge(detail::differentiate_line(fft, line, work, field.axis1.step()));
      std::copy(line.begin(), line.end(), out.values.begin() + static_cast<std::ptrdiff_t>(i * n1));
    }
  } else {
    line.resize(n0);
    for (std::size_t j = 0; j < n1; ++j) {
      for (std::size_t i = 0; i < n0; ++i) line[i] = field(i, j);
      extent.merge(detail::differentiate_line(fft, line, work, field.axis0.step()));
      for (std::size_t i = 0; i < n0; ++i) out(i, j) = line[i];
    }
  }
  detail::report_health(extent.ratio(), "spectral tail", policy);
  return out;
}

}  // namespace clocklab
