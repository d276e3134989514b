#include "nlwave/solver3d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

/// Strides and inverse squared steps shared by every stencil loop.
struct Stencil {
  int n;
  long sm, sn;
  double ix2, iy2, iz2;

  explicit Stencil(const Grid3& g)
      : n(g.n),
        sm(static_cast<long>(g.n + 2) * (g.n + 2)),
        sn(g.n + 2),
        ix2(1.0 / (g.dx * g.dx)),
        iy2(1.0 / (g.dy * g.dy)),
        iz2(1.0 / (g.dz * g.dz)) {}

  long at(int m, int q, int p) const { return m * sm + q * sn + p; }

  double lap(const double* w, long o) const {
    const double c2 = 2.0 * w[o];
    return (w[o + sm] + w[o - sm] - c2) * ix2 + (w[o + sn] + w[o - sn] - c2) * iy2 +
           (w[o + 1] + w[o - 1] - c2) * iz2;
  }

  /// Sum of magnitudes of the terms entering lap.
  double lap_abs(const double* w, long o) const {
    const double c2 = 2.0 * std::abs(w[o]);
    return (std::abs(w[o + sm]) + std::abs(w[o - sm]) + c2) * ix2 +
           (std::abs(w[o + sn]) + std::abs(w[o - sn]) + c2) * iy2 +
           (std::abs(w[o + 1]) + std::abs(w[o - 1]) + c2) * iz2;
  }
};

void require_shapes(const Problem3D& problem, const FieldLevel& a, const FieldLevel& b,
                    const FieldLevel& c) {
  const int n = problem.n();
  if (a.n() != n || b.n() != n || c.n() != n) {
    throw ContractError("field levels do not match the grid dimension");
  }
}

struct SiteTerms {
  double value;
  double scale;
};

SiteTerms residual_at(const Problem3D& pr, const Stencil& st, const double* um, const double* u,
                      const double* up, long o, double gamma) {
  const MediumParams& md = pr.medium();
  const double dt = pr.dt();
  const double idt2 = 1.0 / (dt * dt);
  const double c2 = md.coupling * md.coupling;
  const double a = up[o];
  const double b = um[o];
  const double q = potential_quotient(md.potential, a, b);
  const double lap_u = st.lap(u, o);
  const double beta_term = md.beta * (st.lap(up, o) - st.lap(um, o)) / (2.0 * dt);
  const double value = (a - 2.0 * u[o] + b) * idt2 - c2 * lap_u - beta_term +
                       gamma * (a - b) / (2.0 * dt) + 0.5 * md.mass_sq * (a + b) + q -
                       md.josephson;
  const double scale = (std::abs(a) + 2.0 * std::abs(u[o]) + std::abs(b)) * idt2 +
                       c2 * st.lap_abs(u, o) +
                       md.beta * (st.lap_abs(up, o) + st.lap_abs(um, o)) / (2.0 * dt) +
                       gamma * (std::abs(a) + std::abs(b)) / (2.0 * dt) +
                       0.5 * std::abs(md.mass_sq) * (std::abs(a) + std::abs(b)) + std::abs(q) +
                       md.josephson;
  return {value, scale};
}

template <class F>
void for_interior(int workers, int n, F&& body) {
  parallel_for(workers, 1, n + 1, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m)
      for (int q = 1; q <= n; ++q)
        for (int p = 1; p <= n; ++p) body(m, q, p);
  });
}

/// Diagonal of the implicit Jacobian, without the potential part.
double linear_diagonal(const Problem3D& pr, int m, int q, int p) {
  const MediumParams& md = pr.medium();
  const Grid3& g = pr.grid();
  const double dt = pr.dt();
  const int n = g.n;
  const auto axis = [n](int idx, double d) { return (idx == n ? 1.0 : 2.0) / (d * d); };
  return 1.0 / (dt * dt) + pr.gamma_at(m, q, p) / (2.0 * dt) + 0.5 * md.mass_sq +
         md.beta / (2.0 * dt) * (axis(m, g.dx) + axis(q, g.dy) + axis(p, g.dz));
}

}  // namespace

void NewtonSettings::validate() const {
  if (!(tol_residual > 0.0) || !(linear_tol > 0.0) || max_iters < 1 || linear_max_iters < 1) {
    throw ContractError("Newton settings must all be positive");
  }
}

Problem3D::Problem3D(MediumParams medium, Grid3 grid, TimeGrid time, DampingProfile damping,
                     DrivingSignal signal)
    : medium_(medium),
      grid_(grid),
      time_(time),
      damping_(damping),
      signal_(std::move(signal)) {
  medium_.validate();
  grid_.validate();
  time_.validate();
  damping_.validate();
  signal_.validate();
  gamma_site_ = InteriorField(grid_.n);
  for (int m = 1; m <= grid_.n; ++m)
    for (int q = 1; q <= grid_.n; ++q)
      for (int p = 1; p <= grid_.n; ++p)
        gamma_site_(m, q, p) = eval_damping_site(damping_, medium_.gamma, m, q, p, grid_.n);
}

long index_map(int m, int n, int p, int grid_n) {
  const int hi = grid_n + 1;
  if (grid_n < 1 || m < 0 || n < 0 || p < 0 || m > hi || n > hi || p > hi) {
    throw RangeError("index_map: indices outside [0, N+1]");
  }
  const long s = grid_n + 2;
  return m * s * s + n * s + p + 1;
}

void apply_boundaries(const Problem3D& problem, FieldLevel& level, long k) {
  level.set_driven_faces(problem.boundary_value(k));
  level.sync_ghosts();
}

SimState3D make_rest_state(const Problem3D& problem) {
  return make_state(problem, FieldLevel(problem.n()), FieldLevel(problem.n()));
}

SimState3D make_state(const Problem3D& problem, FieldLevel u0, FieldLevel u1) {
  if (u0.n() != problem.n() || u1.n() != problem.n()) {
    throw ContractError("initial levels do not match the grid dimension");
  }
  apply_boundaries(problem, u0, 0);
  apply_boundaries(problem, u1, 1);
  return SimState3D{std::move(u0), std::move(u1), 1};
}

SimState3D make_state_with_velocity(const Problem3D& problem, FieldLevel u0,
                                    const FieldLevel& velocity) {
  if (u0.n() != problem.n() || velocity.n() != problem.n()) {
    throw ContractError("initial levels do not match the grid dimension");
  }
  FieldLevel u1 = u0;
  auto dst = u1.values();
  auto vel = velocity.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += problem.dt() * vel[i];
  return make_state(problem, std::move(u0), std::move(u1));
}

InteriorField scheme_residual(const Problem3D& problem, const FieldLevel& prev,
                              const FieldLevel& curr, const FieldLevel& next, int workers) {
  require_shapes(problem, prev, curr, next);
  const Stencil st(problem.grid());
  InteriorField out(problem.n());
  const double* um = prev.values().data();
  const double* u = curr.values().data();
  const double* up = next.values().data();
  for_interior(workers, st.n, [&](int m, int q, int p) {
    out(m, q, p) = residual_at(problem, st, um, u, up, st.at(m, q, p), problem.gamma_at(m, q, p)).value;
  });
  return out;
}

InteriorField scheme_residual_scale(const Problem3D& problem, const FieldLevel& prev,
                                    const FieldLevel& curr, const FieldLevel& next,
                                    int workers) {
  require_shapes(problem, prev, curr, next);
  const Stencil st(problem.grid());
  InteriorField out(problem.n());
  const double* um = prev.values().data();
  const double* u = curr.values().data();
  const double* up = next.values().data();
  for_interior(workers, st.n, [&](int m, int q, int p) {
    out(m, q, p) = residual_at(problem, st, um, u, up, st.at(m, q, p), problem.gamma_at(m, q, p)).scale;
  });
  return out;
}

double max_scaled_residual(const Problem3D& problem, const FieldLevel& prev,
                           const FieldLevel& curr, const FieldLevel& next, int workers) {
  const InteriorField r = scheme_residual(problem, prev, curr, next, workers);
  const InteriorField s = scheme_residual_scale(problem, prev, curr, next, workers);
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    worst = std::max(worst, std::abs(r.values()[i]) / std::max(1.0, s.values()[i]));
  }
  return worst;
}

StepStats step_explicit(const Problem3D& problem, SimState3D& state, const NewtonSettings& newton,
                        int workers) {
  const MediumParams& md = problem.medium();
  if (md.beta != 0.0) throw ContractError("step_explicit requires beta == 0");
  newton.validate();
  require_shapes(problem, state.prev, state.curr, state.curr);

  const Stencil st(problem.grid());
  const double dt = problem.dt();
  const double idt2 = 1.0 / (dt * dt);
  const double c2 = md.coupling * md.coupling;
  const double base = idt2 + 0.5 * md.mass_sq;

  // The new level overwrites prev in place: each site reads only its own u^{k-1}.
  FieldLevel& next = state.prev;
  const double* u = state.curr.values().data();
  double* w = next.values().data();

  const int n = st.n;
  std::vector<double> worst(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> iters(static_cast<std::size_t>(n + 1), 0);
  parallel_for(workers, 1, n + 1, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      double slab_worst = 0.0;
      int slab_iters = 0;
      for (int q = 1; q <= n; ++q) {
        for (int p = 1; p <= n; ++p) {
          const long o = st.at(m, q, p);
          const double b = w[o];
          const double gamma = problem.gamma_at(m, q, p);
          const double g2 = gamma / (2.0 * dt);
          const double a_coef = base + g2;
          const double rhs = (2.0 * u[o] - b) * idt2 + c2 * st.lap(u, o) + g2 * b -
                             0.5 * md.mass_sq * b + md.josephson;
          double x = 2.0 * u[o] - b;
          int it = 0;
          for (;; ++it) {
            const double qv = potential_quotient(md.potential, x, b);
            const double f = a_coef * x + qv - rhs;
            const double scale = std::max(1.0, std::abs(a_coef * x) + std::abs(qv) + std::abs(rhs));
            if (std::abs(f) <= newton.tol_residual * scale) {
              slab_worst = std::max(slab_worst, std::abs(f) / scale);
              break;
            }
            if (it >= newton.max_iters || !std::isfinite(f)) {
              throw StepFailure("explicit Newton did not converge at step " +
                                    std::to_string(state.k + 1),
                                index_map(m, q, p, n), f);
            }
            x -= f / (a_coef + potential_quotient_da(md.potential, x, b));
          }
          slab_iters = std::max(slab_iters, it);
          w[o] = x;
        }
      }
      worst[static_cast<std::size_t>(m)] = slab_worst;
      iters[static_cast<std::size_t>(m)] = slab_iters;
    }
  });
  apply_boundaries(problem, next, state.k + 1);
  std::swap(state.prev, state.curr);
  ++state.k;

  StepStats stats;
  stats.scaled_residual = *std::max_element(worst.begin(), worst.end());
  stats.newton_iters = *std::max_element(iters.begin(), iters.end());
  return stats;
}

InteriorField jacobian_apply(const Problem3D& problem, const FieldLevel& prev,
                             const FieldLevel& curr, const FieldLevel& next,
                             const InteriorField& direction) {
  require_shapes(problem, prev, curr, next);
  const int n = problem.n();
  if (direction.n() != n) throw ContractError("direction does not match the grid dimension");
  const MediumParams& md = problem.medium();
  const Grid3& g = problem.grid();
  const double dt = problem.dt();
  const double ox = -md.beta / (2.0 * dt * g.dx * g.dx);
  const double oy = -md.beta / (2.0 * dt * g.dy * g.dy);
  const double oz = -md.beta / (2.0 * dt * g.dz * g.dz);
  InteriorField out(n);
  for (int m = 1; m <= n; ++m)
    for (int q = 1; q <= n; ++q)
      for (int p = 1; p <= n; ++p) {
        const double diag = linear_diagonal(problem, m, q, p) +
                            potential_quotient_da(md.potential, next(m, q, p), prev(m, q, p));
        double acc = diag * direction(m, q, p);
        if (m > 1) acc += ox * direction(m - 1, q, p);
        if (m < n) acc += ox * direction(m + 1, q, p);
        if (q > 1) acc += oy * direction(m, q - 1, p);
        if (q < n) acc += oy * direction(m, q + 1, p);
        if (p > 1) acc += oz * direction(m, q, p - 1);
        if (p < n) acc += oz * direction(m, q, p + 1);
        out(m, q, p) = acc;
      }
  return out;
}

StepStats step_implicit(const Problem3D& problem, SimState3D& state, const NewtonSettings& newton,
                        int workers) {
  newton.validate();
  require_shapes(problem, state.prev, state.curr, state.curr);
  const MediumParams& md = problem.medium();
  const Grid3& g = problem.grid();
  const Stencil st(g);
  const int n = st.n;
  const double dt = problem.dt();
  const double ox = -md.beta / (2.0 * dt * g.dx * g.dx);
  const double oy = -md.beta / (2.0 * dt * g.dy * g.dy);
  const double oz = -md.beta / (2.0 * dt * g.dz * g.dz);

  FieldLevel next(n);
  {
    auto dst = next.values();
    auto u = state.curr.values();
    auto um = state.prev.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = 2.0 * u[i] - um[i];
  }
  apply_boundaries(problem, next, state.k + 1);

  const double* um = state.prev.values().data();
  const double* u = state.curr.values().data();
  double* up = next.values().data();

  InteriorField res(n), diag(n), delta(n), trial(n);
  StepStats stats;
  stats.dominance_margin = INFINITY;
  const std::size_t slabs = static_cast<std::size_t>(n + 1);
  std::vector<double> slab_a(slabs), slab_b(slabs);

  for (int it = 0;; ++it) {
    // Residual, scaled convergence measure and Jacobian diagonal.
    std::fill(slab_a.begin(), slab_a.end(), 0.0);
    std::fill(slab_b.begin(), slab_b.end(), 0.0);
    parallel_for(workers, 1, n + 1, [&](int lo, int hi) {
      for (int m = lo; m < hi; ++m) {
        double worst = 0.0, rmax = 0.0;
        for (int q = 1; q <= n; ++q)
          for (int p = 1; p <= n; ++p) {
            const long o = st.at(m, q, p);
            const SiteTerms t = residual_at(problem, st, um, u, up, o, problem.gamma_at(m, q, p));
            res(m, q, p) = t.value;
            worst = std::max(worst, std::abs(t.value) / std::max(1.0, t.scale));
            rmax = std::max(rmax, std::abs(t.value));
            diag(m, q, p) = linear_diagonal(problem, m, q, p) +
                            potential_quotient_da(md.potential, up[o], um[o]);
          }
        slab_a[static_cast<std::size_t>(m)] = worst;
        slab_b[static_cast<std::size_t>(m)] = rmax;
      }
    });
    const double worst = *std::max_element(slab_a.begin(), slab_a.end());
    const double rnorm = *std::max_element(slab_b.begin(), slab_b.end());
    stats.scaled_residual = worst;
    if (!std::isfinite(worst)) {
      throw StepFailure("implicit Newton produced a non-finite residual at step " +
                            std::to_string(state.k + 1),
                        -1, worst);
    }
    if (worst <= newton.tol_residual) break;
    if (it >= newton.max_iters) {
      long site = -1;
      double big = -1.0;
      for (int m = 1; m <= n; ++m)
        for (int q = 1; q <= n; ++q)
          for (int p = 1; p <= n; ++p)
            if (std::abs(res(m, q, p)) > big) {
              big = std::abs(res(m, q, p));
              site = index_map(m, q, p, n);
            }
      throw StepFailure("implicit Newton did not converge at step " + std::to_string(state.k + 1),
                        site, big);
    }
    stats.newton_iters = it + 1;

    // Diagonal dominance margin of this Jacobian.
    for (int m = 1; m <= n; ++m)
      for (int q = 1; q <= n; ++q)
        for (int p = 1; p <= n; ++p) {
          const double off = std::abs(ox) * ((m > 1) + (m < n)) +
                             std::abs(oy) * ((q > 1) + (q < n)) +
                             std::abs(oz) * ((p > 1) + (p < n));
          stats.dominance_margin = std::min(stats.dominance_margin, diag(m, q, p) - off);
        }

    // Jacobi iteration for J delta = -res; the update difference times D is the linear residual.
    std::fill(delta.values().begin(), delta.values().end(), 0.0);
    double reference = INFINITY;
    int since = 0;
    for (int lit = 0;; ++lit) {
      parallel_for(workers, 1, n + 1, [&](int lo, int hi) {
        for (int m = lo; m < hi; ++m) {
          double change = 0.0;
          for (int q = 1; q <= n; ++q)
            for (int p = 1; p <= n; ++p) {
              double acc = -res(m, q, p);
              if (m > 1) acc -= ox * delta(m - 1, q, p);
              if (m < n) acc -= ox * delta(m + 1, q, p);
              if (q > 1) acc -= oy * delta(m, q - 1, p);
              if (q < n) acc -= oy * delta(m, q + 1, p);
              if (p > 1) acc -= oz * delta(m, q, p - 1);
              if (p < n) acc -= oz * delta(m, q, p + 1);
              const double d = diag(m, q, p);
              const double v = acc / d;
              change = std::max(change, std::abs(d * (v - delta(m, q, p))));
              trial(m, q, p) = v;
            }
          slab_a[static_cast<std::size_t>(m)] = change;
        }
      });
      slab_a[0] = 0.0;
      const double lres = *std::max_element(slab_a.begin(), slab_a.end());
      std::swap(delta, trial);
      ++stats.linear_iters;
      if (!std::isfinite(lres)) {
        throw SolverError("linear iteration diverged; reduce the time step");
      }
      if (lres <= newton.linear_tol * rnorm) break;
      if (lres <= 0.5 * reference) {
        reference = lres;
        since = 0;
      } else if (++since >= 50) {
        throw SolverError("linear iteration stagnated (residual not halved in 50 sweeps); "
                          "reduce the time step");
      }
      if (lit + 1 >= newton.linear_max_iters) {
        throw SolverError("linear iteration hit its iteration limit; reduce the time step");
      }
    }

    for (int m = 1; m <= n; ++m)
      for (int q = 1; q <= n; ++q)
        for (int p = 1; p <= n; ++p) up[st.at(m, q, p)] += delta(m, q, p);
    next.sync_ghosts();
  }
  if (!std::isfinite(stats.dominance_margin)) stats.dominance_margin = 0.0;

  state.prev = std::move(state.curr);
  state.curr = std::move(next);
  ++state.k;
  return stats;
}

StepStats step(const Problem3D& problem, SimState3D& state, const NewtonSettings& newton,
               int workers) {
  if (problem.medium().beta == 0.0) return step_explicit(problem, state, newton, workers);
  return step_implicit(problem, state, newton, workers);
}

double jacobian_check(const Problem3D& problem, const FieldLevel& prev, const FieldLevel& curr,
                      const FieldLevel& next, double h, std::uint64_t seed) {
  require_shapes(problem, prev, curr, next);
  const int n = problem.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  InteriorField dir(n);
  for (double& v : dir.values()) v = dist(rng);

  FieldLevel plus = next, minus = next;
  for (int m = 1; m <= n; ++m)
    for (int q = 1; q <= n; ++q)
      for (int p = 1; p <= n; ++p) {
        plus(m, q, p) += h * dir(m, q, p);
        minus(m, q, p) -= h * dir(m, q, p);
      }
  plus.sync_ghosts();
  minus.sync_ghosts();
  FieldLevel base = next;
  base.sync_ghosts();
  const InteriorField rp = scheme_residual(problem, prev, curr, plus);
  const InteriorField rm = scheme_residual(problem, prev, curr, minus);
  const InteriorField jv = jacobian_apply(problem, prev, curr, base, dir);
  double worst = 0.0;
  for (std::size_t i = 0; i < jv.size(); ++i) {
    const double fd = (rp.values()[i] - rm.values()[i]) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - jv.values()[i]));
  }
  return worst;
}

}  // namespace nlwave
