#pragma once

#include <string>

#include "nlwave/model.hpp"

namespace nlwave {

/// Necessary (not sufficient) stability condition lhs < rhs, for V' = 0 and J = 0.
struct StabilityReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;
  /// 1/dx^2 + 1/dy^2 + 1/dz^2 (Cartesian only).
  double r_sq = 0.0;
  /// Equal-step form (12R^2 - m2) dt^2 - (gamma + 12 beta R^2) dt against 4.
  bool has_corollary = false;
  double corollary_lhs = 0.0;
  std::string note;
};

StabilityReport check_cartesian(const MediumParams& params, const Grid3& grid, double dt);

StabilityReport check_radial(const MediumParams& params, double dr, double dt);

}  // namespace nlwave
