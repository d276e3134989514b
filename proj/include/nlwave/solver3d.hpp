#pragma once

#include <cstdint>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/model.hpp"

namespace nlwave {

struct NewtonSettings {
  /// Convergence: |R_s| <= tol_residual * max(1, S_s) at every site, where S_s is the
  /// sum of magnitudes of the scheme terms at that site.
  double tol_residual = 1e-12;
  int max_iters = 50;
  double linear_tol = 1e-14;
  int linear_max_iters = 500;

  void validate() const;
};

/// Immutable description of a Cartesian run: medium, grids, damping and forcing.
/// Site-local damping values are evaluated once at construction.
class Problem3D {
 public:
  Problem3D(MediumParams medium, Grid3 grid, TimeGrid time, DampingProfile damping,
            DrivingSignal signal);

  const MediumParams& medium() const { return medium_; }
  const Grid3& grid() const { return grid_; }
  const TimeGrid& time() const { return time_; }
  const DampingProfile& damping() const { return damping_; }
  const DrivingSignal& signal() const { return signal_; }
  int n() const { return grid_.n; }
  double dt() const { return time_.dt; }

  /// gamma_{m,n,p} for interior 1-based indices (no bounds check).
  double gamma_at(int m, int n, int p) const { return gamma_site_(m, n, p); }
  const InteriorField& gamma_field() const { return gamma_site_; }
  bool damping_uniform() const { return damping_.kind != DampingKind::LatticeAbsorbing; }

  double time_at(long k) const { return static_cast<double>(k) * time_.dt; }
  double boundary_value(long k) const { return eval_driving(signal_, time_at(k)); }

 private:
  MediumParams medium_;
  Grid3 grid_;
  TimeGrid time_;
  DampingProfile damping_;
  DrivingSignal signal_;
  InteriorField gamma_site_;
};

/// Levels k-1 (prev) and k (curr). k counts from 0 at the first stored level.
struct SimState3D {
  FieldLevel prev;
  FieldLevel curr;
  long k = 1;
};

struct StepStats {
  int newton_iters = 0;
  int linear_iters = 0;
  /// max_s |R_s| / max(1, S_s) after the accepted iterate.
  double scaled_residual = 0.0;
  /// min_s (diagonal - sum |off-diagonal|) of the implicit Jacobian; 0 for explicit steps.
  double dominance_margin = 0.0;
};

/// i = m (N+2)^2 + n (N+2) + p + 1, for 0 <= m,n,p <= N+1.
long index_map(int m, int n, int p, int grid_n);

/// Dirichlet phi(t_k) on the origin-adjacent faces, then Neumann ghost copies.
void apply_boundaries(const Problem3D& problem, FieldLevel& level, long k);

/// Start from u0 and u1 = u0 + dt v0 (both optional, default zero); boundaries applied at t0, t1.
SimState3D make_rest_state(const Problem3D& problem);
SimState3D make_state(const Problem3D& problem, FieldLevel u0, FieldLevel u1);
SimState3D make_state_with_velocity(const Problem3D& problem, FieldLevel u0,
                                    const FieldLevel& velocity);

/// Left-hand side of the scheme at every interior site for the triple (prev, curr, next).
InteriorField scheme_residual(const Problem3D& problem, const FieldLevel& prev,
                              const FieldLevel& curr, const FieldLevel& next, int workers = 1);

/// Per-site sum of magnitudes of the individual scheme terms (rounding scale of the residual).
InteriorField scheme_residual_scale(const Problem3D& problem, const FieldLevel& prev,
                                    const FieldLevel& curr, const FieldLevel& next,
                                    int workers = 1);

double max_scaled_residual(const Problem3D& problem, const FieldLevel& prev,
                           const FieldLevel& curr, const FieldLevel& next, int workers = 1);

/// Site-decoupled Newton update; requires beta == 0.
StepStats step_explicit(const Problem3D& problem, SimState3D& state,
                        const NewtonSettings& newton = {}, int workers = 1);

/// Global Newton with a matrix-free 7-point Jacobian and Jacobi inner iterations.
StepStats step_implicit(const Problem3D& problem, SimState3D& state,
                        const NewtonSettings& newton = {}, int workers = 1);

/// Explicit path when beta == 0, implicit otherwise.
StepStats step(const Problem3D& problem, SimState3D& state, const NewtonSettings& newton = {},
               int workers = 1);

/// Jacobian of scheme_residual with respect to the interior of next, applied to direction.
InteriorField jacobian_apply(const Problem3D& problem, const FieldLevel& prev,
                             const FieldLevel& curr, const FieldLevel& next,
                             const InteriorField& direction);

/// Max deviation between jacobian_apply and central differences (step h) of
/// scheme_residual along a pseudo-random direction. Diagnostic for n <= 4.
double jacobian_check(const Problem3D& problem, const FieldLevel& prev, const FieldLevel& curr,
                      const FieldLevel& next, double h = 1e-6, std::uint64_t seed = 7);

}  // namespace nlwave
