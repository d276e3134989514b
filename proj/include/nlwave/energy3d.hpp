#pragma once

#include <array>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/solver3d.hpp"

namespace nlwave {

struct EnergyReport {
  double e_curr = 0.0;
  double e_prev = 0.0;
  double rate_lhs = 0.0;
  double rate_rhs = 0.0;
  double residual = 0.0;
  // Pieces of rate_rhs.
  double flux = 0.0;
  double beta_part = 0.0;
  double gamma_part = 0.0;
  // Radial reports only: |(pi/2) rate_lhs - rate_rhs| and the closed-energy identity residual.
  double scaled_residual = 0.0;
  double closed_residual = 0.0;
};

/// Time series of the discrete Hamiltonian at one site.
struct SiteSeries {
  std::array<int, 3> site{1, 1, 1};
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> hamiltonian;
  /// Left-endpoint Riemann sum of H^k dt.
  double integral = 0.0;

  void append(double t, double h) {
    times.push_back(t);
    hamiltonian.push_back(h);
    integral += h * dt;
  }
};

/// H^k at an interior site from levels k (curr) and k+1 (next).
double site_hamiltonian(const Problem3D& problem, const FieldLevel& curr, const FieldLevel& next,
                        int m, int n, int p);

/// E^k: interior Hamiltonians plus the driven-face coupling sums, times the cell volume.
double total_energy(const Problem3D& problem, const FieldLevel& curr, const FieldLevel& next,
                    int workers = 1);

/// Discrete energy rate from three consecutive levels against the exact identity.
/// Throws IdentityNotApplicable when the triple violates the scheme by more than 100 tol.
EnergyReport energy_rate_report(const Problem3D& problem, const FieldLevel& prev,
                                const FieldLevel& curr, const FieldLevel& next,
                                double tol = 1e-12, int workers = 1);

/// Right-hand side of the identity only (no scheme check).
EnergyReport energy_rate_rhs(const Problem3D& problem, const FieldLevel& prev,
                             const FieldLevel& curr, const FieldLevel& next, int workers = 1);

/// Semi-discrete lattice energy rate with time derivatives replaced by centered
/// differences over 2 dt. Unit spatial steps only.
double lattice_rate_rhs(const Problem3D& problem, const FieldLevel& prev, const FieldLevel& curr,
                        const FieldLevel& next);

}  // namespace nlwave
