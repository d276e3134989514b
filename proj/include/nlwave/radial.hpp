#pragma once

#include <vector>

#include "nlwave/energy3d.hpp"
#include "nlwave/model.hpp"
#include "nlwave/solver3d.hpp"

namespace nlwave {

enum class OuterBoundary { Consistent, AsPrinted };

/// Radial problem for v = r u on r_j = epsilon + j dr, j = 0..M+1.
struct RadialParams {
  double epsilon = 0.02;
  double dr = 0.02;
  int m_nodes = 298;
  double dt = 0.02;
  long steps = 1;
  /// Clock value of level 0; negative when a warmup precedes t = 0.
  double t0 = 0.0;
  MediumParams medium{};
  DampingProfile damping{};
  DrivingSignal signal{};
  OuterBoundary outer = OuterBoundary::Consistent;

  void validate() const;
  double radius(int j) const { return epsilon + j * dr; }
  double outer_radius() const { return radius(m_nodes + 1); }
};

class RadialProblem {
 public:
  explicit RadialProblem(RadialParams params);

  const RadialParams& params() const { return p_; }
  int m() const { return p_.m_nodes; }
  double dt() const { return p_.dt; }
  double radius(int j) const { return radius_[static_cast<std::size_t>(j)]; }
  double gamma_at(int j) const { return gamma_[static_cast<std::size_t>(j)]; }
  /// v_{M+1} = kappa v_M.
  double kappa() const { return kappa_; }
  double time_at(long k) const { return p_.t0 + static_cast<double>(k) * p_.dt; }
  double origin_value(long k) const { return p_.epsilon * eval_driving(p_.signal, time_at(k)); }

 private:
  RadialParams p_;
  std::vector<double> radius_;
  std::vector<double> gamma_;
  double kappa_ = 0.0;
};

struct RadialState {
  std::vector<double> prev;
  std::vector<double> curr;
  long k = 1;
};

/// Solves the discrete outer boundary relation for v_{M+1}.
double outer_boundary_value(double v_m, const RadialParams& params);

/// Sets v_0 = epsilon phi(t_k) and the outer node from the boundary relation.
void apply_radial_boundaries(const RadialProblem& problem, std::vector<double>& level, long k);

/// Rest state (optionally with initial data) with boundaries applied at levels 0 and 1.
RadialState make_radial_state(const RadialProblem& problem);
RadialState make_radial_state(const RadialProblem& problem, std::vector<double> v0,
                              std::vector<double> v1);

/// Scheme left-hand side at j = 1..M (index j-1 of the result).
std::vector<double> radial_residual(const RadialProblem& problem, const std::vector<double>& prev,
                                    const std::vector<double>& curr,
                                    const std::vector<double>& next);

/// max_j |R_j| / max(1, S_j), S_j the sum of term magnitudes.
double radial_max_scaled_residual(const RadialProblem& problem, const std::vector<double>& prev,
                                  const std::vector<double>& curr,
                                  const std::vector<double>& next);

/// One Newton step with tridiagonal (Thomas) linear solves.
StepStats step_radial(const RadialProblem& problem, RadialState& state,
                      const NewtonSettings& newton = {});

/// Discrete radial energy exactly as printed (no pi/2 factor).
double radial_energy(const RadialProblem& problem, const std::vector<double>& curr,
                     const std::vector<double>& next);

/// Energy whose step-to-step change is balanced exactly by the scheme: kinetic, mass,
/// potential and source sums over j = 1..M plus an outer-boundary coupling term.
double radial_energy_closed(const RadialProblem& problem, const std::vector<double>& curr,
                            const std::vector<double>& next);

/// Exact rate of radial_energy_closed: origin flux, beta and gamma sums.
double radial_closed_rate_rhs(const RadialProblem& problem, const std::vector<double>& prev,
                              const std::vector<double>& curr, const std::vector<double>& next);

/// Printed right-hand side of the radial rate proposition (with its -pi/2 factor).
double radial_printed_rate_rhs(const RadialProblem& problem, const std::vector<double>& prev,
                               const std::vector<double>& curr, const std::vector<double>& next);

/// rate_lhs/rate_rhs/residual use the printed energy and rate; scaled_residual compares
/// (pi/2) rate_lhs with the printed rate; closed_residual checks the closed identity.
EnergyReport radial_rate_report(const RadialProblem& problem, const std::vector<double>& prev,
                                const std::vector<double>& curr, const std::vector<double>& next,
                                double tol = 1e-12);

std::string to_string(OuterBoundary b);

}  // namespace nlwave
