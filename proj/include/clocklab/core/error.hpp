#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clocklab {

enum class Errc {
  invalid_argument,
  invalid_gravity,
  at_rest,
  superluminal,
  unknown_dimension,
  configuration,
  singular_metric,
  degenerate_point,
  off_constraint_surface,
  outside_domain,
  non_monotone,
  grid_too_small,
  aliasing,
  undefined_dilation,
  imaginary_residue,
  bracket_failure,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::invalid_gravity: return "invalid gravity";
    case Errc::at_rest: return "cannot weigh at rest";
    case Errc::superluminal: return "superluminal speed";
    case Errc::unknown_dimension: return "unknown dimension";
    case Errc::configuration: return "configuration error";
    case Errc::singular_metric: return "singular spatial metric";
    case Errc::degenerate_point: return "degenerate phase-space point";
    case Errc::off_constraint_surface: return "initial point off the constraint surface";
    case Errc::outside_domain: return "metric evaluated outside its domain";
    case Errc::non_monotone: return "proper time not monotone";
    case Errc::grid_too_small: return "grid too small";
    case Errc::aliasing: return "aliasing";
    case Errc::undefined_dilation: return "undefined dilation";
    case Errc::imaginary_residue: return "imaginary residue";
    case Errc::bracket_failure: return "optimizer bracket failure";
  }
  return "unknown";
}

/// Library error carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace clocklab
