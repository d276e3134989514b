#include "nlwave/energy3d.hpp"

#include <cmath>
#include <string>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

void require_level(const Problem3D& problem, const FieldLevel& f) {
  if (f.n() != problem.n()) throw ContractError("field level does not match the grid dimension");
}

double hamiltonian_unchecked(const Problem3D& pr, const FieldLevel& u, const FieldLevel& up, int m,
                             int n, int p) {
  const MediumParams& md = pr.medium();
  const Grid3& g = pr.grid();
  const double dt = pr.dt();
  const double c2 = md.coupling * md.coupling;
  const double a = up(m, n, p);
  const double b = u(m, n, p);
  const double kin = (a - b) / dt;
  const double gx = (up(m + 1, n, p) - a) * (u(m + 1, n, p) - b) / (g.dx * g.dx);
  const double gy = (up(m, n + 1, p) - a) * (u(m, n + 1, p) - b) / (g.dy * g.dy);
  const double gz = (up(m, n, p + 1) - a) * (u(m, n, p + 1) - b) / (g.dz * g.dz);
  return 0.5 * kin * kin + 0.5 * c2 * (gx + gy + gz) + 0.5 * md.mass_sq * (a * a + b * b) / 2.0 +
         (potential_value(md.potential, a) + potential_value(md.potential, b)) / 2.0 -
         md.josephson * (a + b) / 2.0;
}

}  // namespace

double site_hamiltonian(const Problem3D& problem, const FieldLevel& curr, const FieldLevel& next,
                        int m, int n, int p) {
  require_level(problem, curr);
  require_level(problem, next);
  const int nn = problem.n();
  if (m < 1 || n < 1 || p < 1 || m > nn || n > nn || p > nn) {
    throw RangeError("site_hamiltonian: site is not interior");
  }
  return hamiltonian_unchecked(problem, curr, next, m, n, p);
}

double total_energy(const Problem3D& problem, const FieldLevel& curr, const FieldLevel& next,
                    int workers) {
  require_level(problem, curr);
  require_level(problem, next);
  const int n = problem.n();
  const Grid3& g = problem.grid();
  const double c2 = problem.medium().coupling * problem.medium().coupling;
  // Slab m = 0 carries the driven-face sums; slabs 1..n the interior Hamiltonians.
  std::vector<double> parts(static_cast<std::size_t>(n + 1), 0.0);
  parallel_for(workers, 0, n + 1, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      double acc = 0.0;
      if (m == 0) {
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j) {
            acc += (next(1, i, j) - next(0, i, j)) * (curr(1, i, j) - curr(0, i, j)) / (g.dx * g.dx);
            acc += (next(i, 1, j) - next(i, 0, j)) * (curr(i, 1, j) - curr(i, 0, j)) / (g.dy * g.dy);
            acc += (next(i, j, 1) - next(i, j, 0)) * (curr(i, j, 1) - curr(i, j, 0)) / (g.dz * g.dz);
          }
        acc *= 0.5 * c2;
      } else {
        for (int q = 1; q <= n; ++q)
          for (int p = 1; p <= n; ++p) acc += hamiltonian_unchecked(problem, curr, next, m, q, p);
      }
      parts[static_cast<std::size_t>(m)] = acc;
    }
  });
  return pairwise_sum(parts) * g.cell_volume();
}

EnergyReport energy_rate_rhs(const Problem3D& problem, const FieldLevel& prev,
                             const FieldLevel& curr, const FieldLevel& next, int workers) {
  require_level(problem, prev);
  require_level(problem, curr);
  require_level(problem, next);
  const int n = problem.n();
  const Grid3& g = problem.grid();
  const MediumParams& md = problem.medium();
  const double dt = problem.dt();
  const double c2 = md.coupling * md.coupling;
  const auto w = [&](int m, int q, int p) { return next(m, q, p) - prev(m, q, p); };

  const auto slots = static_cast<std::size_t>(n + 1);
  std::vector<double> flux(slots, 0.0), beta(slots, 0.0), gam(slots, 0.0);
  parallel_for(workers, 0, n + 1, [&](int lo, int hi) {
    for (int m = lo; m < hi; ++m) {
      const auto s = static_cast<std::size_t>(m);
      if (m == 0) {
        double f = 0.0, b = 0.0;
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j) {
            f += (curr(1, i, j) - curr(0, i, j)) / (g.dx * g.dx) * w(0, i, j) / (2.0 * dt);
            f += (curr(i, 1, j) - curr(i, 0, j)) / (g.dy * g.dy) * w(i, 0, j) / (2.0 * dt);
            f += (curr(i, j, 1) - curr(i, j, 0)) / (g.dz * g.dz) * w(i, j, 0) / (2.0 * dt);
            const double ex = 2.0 * g.dx * dt, ey = 2.0 * g.dy * dt, ez = 2.0 * g.dz * dt;
            b += (w(1, i, j) - w(0, i, j)) * w(0, i, j) / (ex * ex);
            b += (w(i, 1, j) - w(i, 0, j)) * w(i, 0, j) / (ey * ey);
            b += (w(i, j, 1) - w(i, j, 0)) * w(i, j, 0) / (ez * ez);
          }
        flux[s] = -c2 * f;
        beta[s] = b;
        continue;
      }
      double b = 0.0, c = 0.0;
      for (int q = 1; q <= n; ++q)
        for (int p = 1; p <= n; ++p) {
          const double tx = (w(m, q, p) - w(m - 1, q, p)) / (2.0 * g.dx * dt);
          const double ty = (w(m, q, p) - w(m, q - 1, p)) / (2.0 * g.dy * dt);
          const double tz = (w(m, q, p) - w(m, q, p - 1)) / (2.0 * g.dz * dt);
          b += tx * tx + ty * ty + tz * tz;
          const double v = w(m, q, p) / (2.0 * dt);
          c += problem.gamma_at(m, q, p) * v * v;
        }
      beta[s] = b;
      gam[s] = c;
    }
  });
  const double dv = g.cell_volume();
  EnergyReport r;
  r.flux = pairwise_sum(flux) * dv;
  r.beta_part = -md.beta * pairwise_sum(beta) * dv;
  r.gamma_part = -pairwise_sum(gam) * dv;
  r.rate_rhs = r.flux + r.beta_part + r.gamma_part;
  return r;
}

EnergyReport energy_rate_report(const Problem3D& problem, const FieldLevel& prev,
                                const FieldLevel& curr, const FieldLevel& next, double tol,
                                int workers) {
  const double violation = max_scaled_residual(problem, prev, curr, next, workers);
  if (!(violation <= 100.0 * tol)) {
    throw IdentityNotApplicable("levels do not satisfy the scheme (scaled residual " +
                                std::to_string(violation) + ")");
  }
  EnergyReport r = energy_rate_rhs(problem, prev, curr, next, workers);
  r.e_prev = total_energy(problem, prev, curr, workers);
  r.e_curr = total_energy(problem, curr, next, workers);
  r.rate_lhs = (r.e_curr - r.e_prev) / problem.dt();
  r.residual = std::abs(r.rate_lhs - r.rate_rhs);
  return r;
}

double lattice_rate_rhs(const Problem3D& problem, const FieldLevel& prev, const FieldLevel& curr,
                        const FieldLevel& next) {
  if (!problem.grid().unit_steps()) {
    throw ModeError("lattice_rate_rhs requires unit spatial steps");
  }
  require_level(problem, prev);
  require_level(problem, curr);
  require_level(problem, next);
  const int n = problem.n();
  const MediumParams& md = problem.medium();
  const double dt = problem.dt();
  const double c2 = md.coupling * md.coupling;
  const auto ud = [&](int m, int q, int p) { return (next(m, q, p) - prev(m, q, p)) / (2.0 * dt); };

  double face = 0.0, beta_face = 0.0;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      face += (curr(1, i, j) - curr(0, i, j)) * ud(0, i, j) +
              (curr(i, 1, j) - curr(i, 0, j)) * ud(i, 0, j) +
              (curr(i, j, 1) - curr(i, j, 0)) * ud(i, j, 0);
      beta_face += (ud(1, i, j) - ud(0, i, j)) * ud(0, i, j) +
                   (ud(i, 1, j) - ud(i, 0, j)) * ud(i, 0, j) +
                   (ud(i, j, 1) - ud(i, j, 0)) * ud(i, j, 0);
    }
  double beta_bulk = 0.0, damp = 0.0;
  for (int m = 1; m <= n; ++m)
    for (int q = 1; q <= n; ++q)
      for (int p = 1; p <= n; ++p) {
        const double dx = ud(m, q, p) - ud(m - 1, q, p);
        const double dy = ud(m, q, p) - ud(m, q - 1, p);
        const double dz = ud(m, q, p) - ud(m, q, p - 1);
        beta_bulk += dx * dx + dy * dy + dz * dz;
        damp += problem.gamma_at(m, q, p) * ud(m, q, p) * ud(m, q, p);
      }
  return -c2 * face - md.beta * (beta_bulk + beta_face) - damp;
}

}  // namespace nlwave
