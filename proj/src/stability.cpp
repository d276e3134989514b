#include "nlwave/stability.hpp"

namespace nlwave {

namespace {

void finish(StabilityReport& r) {
  r.margin = r.rhs - r.lhs;
  r.satisfied = r.lhs < r.rhs;
  if (r.margin == 0.0) r.note = "boundary case: lhs equals rhs, strict inequality fails";
}

}  // namespace

StabilityReport check_cartesian(const MediumParams& params, const Grid3& grid, double dt) {
  StabilityReport r;
  r.r_sq = 1.0 / (grid.dx * grid.dx) + 1.0 / (grid.dy * grid.dy) + 1.0 / (grid.dz * grid.dz);
  r.lhs = 4.0 * r.r_sq * (dt * dt - params.beta * dt) - (params.gamma + params.mass_sq * dt) * dt;
  r.rhs = 4.0;
  if (grid.dx == grid.dy && grid.dy == grid.dz) {
    const double rr = 1.0 / (grid.dx * grid.dx);
    r.has_corollary = true;
    r.corollary_lhs = (12.0 * rr - params.mass_sq) * dt * dt -
                      (params.gamma + 12.0 * params.beta * rr) * dt;
  }
  finish(r);
  return r;
}

StabilityReport check_radial(const MediumParams& params, double dr, double dt) {
  StabilityReport r;
  r.lhs = (dt / dr) * (dt / dr);
  r.rhs = 1.0 + params.gamma * dt / 4.0 + params.beta * dt / (dr * dr) +
          params.mass_sq * dt * dt / 4.0;
  finish(r);
  return r;
}

}  // namespace nlwave
