#pragma once

#include <bit>
#include <cstddef>
#include <string>
#include <vector>

#include "clocklab/core/error.hpp"

namespace clocklab {

/// Periodic uniform grid on [min, max) with a power-of-two node count.
class UniformGrid {
 public:
  UniformGrid() = default;

  UniformGrid(double min, double max, std::size_t n) : min_(min), max_(max), n_(n) {
    if (n < 8 || !std::has_single_bit(n)) {
      throw Error(Errc::configuration,
                  "grid size must be a power of two >= 8, got " + std::to_string(n));
    }
    if (!(max > min)) throw Error(Errc::configuration, "grid requires max > min");
    step_ = (max - min) / static_cast<double>(n);
  }

  double min() const { return min_; }
  double max() const { return max_; }
  std::size_t size() const { return n_; }
  double step() const { return step_; }
  double length() const { return max_ - min_; }
  double node(std::size_t k) const { return min_ + static_cast<double>(k) * step_; }

  std::vector<double> nodes() const {
    std::vector<double> out(n_);
    for (std::size_t k = 0; k < n_; ++k) out[k] = node(k);
    return out;
  }

 private:
  double min_ = 0.0;
  double max_ = 1.0;
  std::size_t n_ = 0;
  double step_ = 0.0;
};

/// Smallest power of two >= n.
inline std::size_t next_pow2(std::size_t n) { return std::bit_ceil(n < 8 ? std::size_t{8} : n); }

}  // namespace clocklab
