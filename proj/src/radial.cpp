#include "nlwave/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

double kappa_for(const RadialParams& p) {
  const double r = p.radius(p.m_nodes);
  const double denom = p.outer == OuterBoundary::Consistent ? 2.0 * r : 2.0 * r * r;
  const double lo = 1.0 / p.dr + 1.0 / denom;
  if (lo == 0.0 || !std::isfinite(lo)) throw ContractError("degenerate outer boundary relation");
  return (1.0 / p.dr - 1.0 / denom) / lo;
}

void require_sizes(const RadialProblem& pr, const std::vector<double>& a,
                   const std::vector<double>& b, const std::vector<double>& c) {
  const auto want = static_cast<std::size_t>(pr.m() + 2);
  if (a.size() != want || b.size() != want || c.size() != want) {
    throw ContractError("radial levels must hold M+2 values");
  }
}

struct Terms {
  double value;
  double scale;
};

Terms residual_at(const RadialProblem& pr, const std::vector<double>& vm,
                  const std::vector<double>& v, const std::vector<double>& vp, int j) {
  const MediumParams& md = pr.params().medium;
  const double dt = pr.dt();
  const double dr = pr.params().dr;
  const double idt2 = 1.0 / (dt * dt);
  const double idr2 = 1.0 / (dr * dr);
  const auto s = static_cast<std::size_t>(j);
  const double r = pr.radius(j);
  const double gamma = pr.gamma_at(j);
  const double a = vp[s], b = vm[s];
  const double lap = v[s + 1] - 2.0 * v[s] + v[s - 1];
  const double lap_p = vp[s + 1] - 2.0 * a + vp[s - 1];
  const double lap_m = vm[s + 1] - 2.0 * b + vm[s - 1];
  const double q = r * potential_quotient(md.potential, a / r, b / r);
  const double value = (a - 2.0 * v[s] + b) * idt2 - lap * idr2 + gamma * (a - b) / (2.0 * dt) -
                       md.beta * (lap_p - lap_m) * idr2 / (2.0 * dt) +
                       0.5 * md.mass_sq * (a + b) + q - md.josephson * r;
  const auto mag = [](const std::vector<double>& w, std::size_t i) {
    return std::abs(w[i + 1]) + 2.0 * std::abs(w[i]) + std::abs(w[i - 1]);
  };
  const double scale = (std::abs(a) + 2.0 * std::abs(v[s]) + std::abs(b)) * idt2 +
                       mag(v, s) * idr2 + gamma * (std::abs(a) + std::abs(b)) / (2.0 * dt) +
                       md.beta * (mag(vp, s) + mag(vm, s)) * idr2 / (2.0 * dt) +
                       0.5 * std::abs(md.mass_sq) * (std::abs(a) + std::abs(b)) + std::abs(q) +
                       md.josephson * r;
  return {value, scale};
}

}  // namespace

void RadialParams::validate() const {
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) throw ContractError("radial.epsilon must be > 0");
  if (!(std::isfinite(dr) && dr > 0.0)) throw ContractError("radial.dr must be > 0");
  if (m_nodes < 1) throw ContractError("radial.m_nodes must be >= 1");
  if (!(std::isfinite(dt) && dt > 0.0)) throw ContractError("time.dt must be > 0");
  if (steps < 1) throw ContractError("time.steps must be >= 1");
  if (!std::isfinite(t0)) throw ContractError("radial clock origin must be finite");
  medium.validate();
  damping.validate();
  signal.validate();
}

RadialProblem::RadialProblem(RadialParams params) : p_(std::move(params)) {
  p_.validate();
  const auto size = static_cast<std::size_t>(p_.m_nodes + 2);
  radius_.resize(size);
  gamma_.resize(size);
  for (int j = 0; j <= p_.m_nodes + 1; ++j) {
    const auto s = static_cast<std::size_t>(j);
    radius_[s] = p_.radius(j);
    gamma_[s] = eval_damping_radius(p_.damping, p_.medium.gamma, radius_[s]);
  }
  kappa_ = kappa_for(p_);
}

double outer_boundary_value(double v_m, const RadialParams& params) {
  return kappa_for(params) * v_m;
}

void apply_radial_boundaries(const RadialProblem& problem, std::vector<double>& level, long k) {
  const auto mm = static_cast<std::size_t>(problem.m());
  if (level.size() != mm + 2) throw ContractError("radial levels must hold M+2 values");
  level[0] = problem.origin_value(k);
  level[mm + 1] = problem.kappa() * level[mm];
}

RadialState make_radial_state(const RadialProblem& problem) {
  const auto size = static_cast<std::size_t>(problem.m() + 2);
  return make_radial_state(problem, std::vector<double>(size, 0.0),
                           std::vector<double>(size, 0.0));
}

RadialState make_radial_state(const RadialProblem& problem, std::vector<double> v0,
                              std::vector<double> v1) {
  apply_radial_boundaries(problem, v0, 0);
  apply_radial_boundaries(problem, v1, 1);
  return RadialState{std::move(v0), std::move(v1), 1};
}

std::vector<double> radial_residual(const RadialProblem& problem, const std::vector<double>& prev,
                                    const std::vector<double>& curr,
                                    const std::vector<double>& next) {
  require_sizes(problem, prev, curr, next);
  std::vector<double> out(static_cast<std::size_t>(problem.m()));
  for (int j = 1; j <= problem.m(); ++j) {
    out[static_cast<std::size_t>(j - 1)] = residual_at(problem, prev, curr, next, j).value;
  }
  return out;
}

double radial_max_scaled_residual(const RadialProblem& problem, const std::vector<double>& prev,
                                  const std::vector<double>& curr,
                                  const std::vector<double>& next) {
  require_sizes(problem, prev, curr, next);
  double worst = 0.0;
  for (int j = 1; j <= problem.m(); ++j) {
    const Terms t = residual_at(problem, prev, curr, next, j);
    worst = std::max(worst, std::abs(t.value) / std::max(1.0, t.scale));
  }
  return worst;
}

StepStats step_radial(const RadialProblem& problem, RadialState& state,
                      const NewtonSettings& newton) {
  newton.validate();
  require_sizes(problem, state.prev, state.curr, state.curr);
  const RadialParams& rp = problem.params();
  const MediumParams& md = rp.medium;
  const int mm = problem.m();
  const auto n = static_cast<std::size_t>(mm);
  const double dt = rp.dt;
  const double idr2 = 1.0 / (rp.dr * rp.dr);
  const double off = -md.beta * idr2 / (2.0 * dt);
  const double base = 1.0 / (dt * dt) + md.beta * idr2 / dt + 0.5 * md.mass_sq;

  std::vector<double> next(n + 2);
  for (std::size_t j = 0; j < n + 2; ++j) next[j] = 2.0 * state.curr[j] - state.prev[j];
  apply_radial_boundaries(problem, next, state.k + 1);

  std::vector<double> res(n), diag(n), cp(n), dp(n);
  StepStats stats;
  for (int it = 0;; ++it) {
    double worst = 0.0, big = 0.0;
    long where = 0;
    for (int j = 1; j <= mm; ++j) {
      const Terms t = residual_at(problem, state.prev, state.curr, next, j);
      const auto s = static_cast<std::size_t>(j);
      res[s - 1] = t.value;
      const double sc = std::abs(t.value) / std::max(1.0, t.scale);
      worst = std::max(worst, sc);
      if (std::abs(t.value) > big) {
        big = std::abs(t.value);
        where = j;
      }
      const double r = problem.radius(j);
      diag[s - 1] = base + problem.gamma_at(j) / (2.0 * dt) +
                    potential_quotient_da(md.potential, next[s] / r, state.prev[s] / r);
    }
    diag[n - 1] += off * problem.kappa();
    stats.scaled_residual = worst;
    if (!std::isfinite(worst)) {
      throw StepFailure("radial Newton produced a non-finite residual at step " +
                            std::to_string(state.k + 1),
                        where, worst);
    }
    if (worst <= newton.tol_residual) break;
    if (it >= newton.max_iters) {
      throw StepFailure("radial Newton did not converge at step " + std::to_string(state.k + 1),
                        where, big);
    }
    stats.newton_iters = it + 1;

    // Thomas elimination for the tridiagonal correction J d = -res.
    double pivot = diag[0];
    if (pivot == 0.0) throw SolverError("zero pivot in tridiagonal factorization");
    cp[0] = off / pivot;
    dp[0] = -res[0] / pivot;
    for (std::size_t i = 1; i < n; ++i) {
      pivot = diag[i] - off * cp[i - 1];
      if (pivot == 0.0 || !std::isfinite(pivot)) {
        throw SolverError("zero pivot in tridiagonal factorization");
      }
      cp[i] = off / pivot;
      dp[i] = (-res[i] - off * dp[i - 1]) / pivot;
    }
    for (std::size_t i = n - 1; i-- > 0;) dp[i] -= cp[i] * dp[i + 1];
    for (std::size_t i = 0; i < n; ++i) next[i + 1] += dp[i];
    next[n + 1] = problem.kappa() * next[n];
  }
  state.prev = std::move(state.curr);
  state.curr = std::move(next);
  ++state.k;
  return stats;
}

double radial_energy(const RadialProblem& problem, const std::vector<double>& curr,
                     const std::vector<double>& next) {
  require_sizes(problem, curr, next, next);
  const RadialParams& rp = problem.params();
  const MediumParams& md = rp.medium;
  const double dt = rp.dt, dr = rp.dr;
  const int mm = problem.m();
  double kin = 0.0, grad = 0.0, mass = 0.0, pot = 0.0, src = 0.0;
  for (int j = 0; j < mm; ++j) {
    const auto s = static_cast<std::size_t>(j);
    const double r = problem.radius(j);
    const double vt = (next[s] - curr[s]) / dt;
    kin += vt * vt;
    grad += (next[s + 1] - next[s]) / dr * (curr[s + 1] - curr[s]) / dr;
    mass += (next[s] * next[s] + curr[s] * curr[s]) / 2.0;
    if (j >= 1) {
      pot += r * r *
             (potential_value(md.potential, next[s] / r) + potential_value(md.potential, curr[s] / r)) /
             2.0;
    }
    src += r * (next[s] + curr[s]) / 2.0;
  }
  return (0.5 * kin + 0.5 * grad + 0.5 * md.mass_sq * mass + pot - md.josephson * src) * dr;
}

double radial_energy_closed(const RadialProblem& problem, const std::vector<double>& curr,
                            const std::vector<double>& next) {
  require_sizes(problem, curr, next, next);
  const RadialParams& rp = problem.params();
  const MediumParams& md = rp.medium;
  const double dt = rp.dt, dr = rp.dr;
  const int mm = problem.m();
  double kin = 0.0, grad = 0.0, mass = 0.0, pot = 0.0, src = 0.0;
  for (int j = 0; j < mm; ++j) {
    const auto s = static_cast<std::size_t>(j);
    grad += (next[s + 1] - next[s]) / dr * (curr[s + 1] - curr[s]) / dr;
  }
  for (int j = 1; j <= mm; ++j) {
    const auto s = static_cast<std::size_t>(j);
    const double r = problem.radius(j);
    const double vt = (next[s] - curr[s]) / dt;
    kin += vt * vt;
    mass += (next[s] * next[s] + curr[s] * curr[s]) / 2.0;
    pot += r * r *
           (potential_value(md.potential, next[s] / r) + potential_value(md.potential, curr[s] / r)) /
           2.0;
    src += r * (next[s] + curr[s]) / 2.0;
  }
  const auto last = static_cast<std::size_t>(mm);
  const double outer = (1.0 - problem.kappa()) / (2.0 * dr) * curr[last] * next[last];
  return (0.5 * kin + 0.5 * grad + 0.5 * md.mass_sq * mass + pot - md.josephson * src) * dr +
         outer;
}

double radial_closed_rate_rhs(const RadialProblem& problem, const std::vector<double>& prev,
                              const std::vector<double>& curr, const std::vector<double>& next) {
  require_sizes(problem, prev, curr, next);
  const RadialParams& rp = problem.params();
  const double dt = rp.dt, dr = rp.dr;
  const int mm = problem.m();
  std::vector<double> w(static_cast<std::size_t>(mm + 2));
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = next[j] - prev[j];
  const double flux = -(curr[1] - curr[0]) * w[0] / (2.0 * dt * dr);
  double beta = 0.0, gam = 0.0;
  for (int j = 1; j <= mm; ++j) {
    const auto s = static_cast<std::size_t>(j);
    beta += w[s] * (w[s + 1] - 2.0 * w[s] + w[s - 1]);
    const double v = w[s] / (2.0 * dt);
    gam += problem.gamma_at(j) * v * v;
  }
  return flux + rp.medium.beta / (4.0 * dt * dt * dr) * beta - gam * dr;
}

double radial_printed_rate_rhs(const RadialProblem& problem, const std::vector<double>& prev,
                               const std::vector<double>& curr, const std::vector<double>& next) {
  require_sizes(problem, prev, curr, next);
  const RadialParams& rp = problem.params();
  const double dt = rp.dt, dr = rp.dr;
  double beta = 0.0, gam = 0.0;
  for (int j = 1; j <= problem.m() - 1; ++j) {
    const auto s = static_cast<std::size_t>(j);
    const double w = next[s] - prev[s];
    const double w_lo = next[s - 1] - prev[s - 1];
    beta += (w / (2.0 * dt)) * ((w - w_lo) / (dt * dr * dr)) * dr;
    gam += problem.gamma_at(j) * (w / (2.0 * dt)) * (w / (2.0 * dt)) * dr;
  }
  return -std::numbers::pi / 2.0 * (rp.medium.beta * beta + gam);
}

EnergyReport radial_rate_report(const RadialProblem& problem, const std::vector<double>& prev,
                                const std::vector<double>& curr, const std::vector<double>& next,
                                double tol) {
  const double violation = radial_max_scaled_residual(problem, prev, curr, next);
  if (!(violation <= 100.0 * tol)) {
    throw IdentityNotApplicable("radial levels do not satisfy the scheme (scaled residual " +
                                std::to_string(violation) + ")");
  }
  const double dt = problem.dt();
  EnergyReport r;
  r.e_prev = radial_energy(problem, prev, curr);
  r.e_curr = radial_energy(problem, curr, next);
  r.rate_lhs = (r.e_curr - r.e_prev) / dt;
  r.rate_rhs = radial_printed_rate_rhs(problem, prev, curr, next);
  r.residual = std::abs(r.rate_lhs - r.rate_rhs);
  r.scaled_residual = std::abs(std::numbers::pi / 2.0 * r.rate_lhs - r.rate_rhs);
  const double closed_lhs =
      (radial_energy_closed(problem, curr, next) - radial_energy_closed(problem, prev, curr)) / dt;
  r.closed_residual = std::abs(closed_lhs - radial_closed_rate_rhs(problem, prev, curr, next));
  return r;
}

std::string to_string(OuterBoundary b) {
  return b == OuterBoundary::Consistent ? "consistent" : "as-printed";
}

}  // namespace nlwave
