#pragma once

#include <cmath>

#include "scomp/types.hpp"

namespace scomp {

// omega(t) = t - ln(1+t), the self-concordant lower model gap. t >= 0.
inline double omega(double t) {
  if (!(t >= 0.0)) throw DomainError("omega: t must be >= 0");
  return t - std::log1p(t);
}

// omega_star(t) = -t - ln(1-t), the upper model gap. 0 <= t < 1.
inline double omega_star(double t) {
  if (!(t >= 0.0) || t >= 1.0) {
    throw DomainError("omega_star: t must lie in [0,1)");
  }
  return -t - std::log1p(-t);
}

}  // namespace scomp
