#pragma once

// Brute-force transcriptions of the discrete formulas, written independently of the
// library kernels. Dense, slow and direct: divided differences are formed literally,
// every sum is a plain loop, linear systems are solved by Gaussian elimination.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "nlwave/field.hpp"
#include "nlwave/model.hpp"

namespace oracle {

using nlwave::FieldLevel;

struct Medium {
  double beta = 0.0, gamma = 0.0, m2 = 0.0, J = 0.0, c = 1.0;
  nlwave::PotentialKind kind = nlwave::PotentialKind::SineGordon;
  double lambda = 0.0;
};

inline double V(const Medium& md, double u) {
  switch (md.kind) {
    case nlwave::PotentialKind::SineGordon: return 1.0 - std::cos(u);
    case nlwave::PotentialKind::KleinGordon: return u * u / 2.0 - u * u * u * u / 24.0;
    case nlwave::PotentialKind::LandauGinzburg: return md.lambda * u * u * u * u;
    case nlwave::PotentialKind::Zero: return 0.0;
  }
  return 0.0;
}

inline double dV(const Medium& md, double u) {
  switch (md.kind) {
    case nlwave::PotentialKind::SineGordon: return std::sin(u);
    case nlwave::PotentialKind::KleinGordon: return u - u * u * u / 6.0;
    case nlwave::PotentialKind::LandauGinzburg: return 4.0 * md.lambda * u * u * u;
    case nlwave::PotentialKind::Zero: return 0.0;
  }
  return 0.0;
}

/// Literal divided difference; the derivative only when the arguments coincide.
inline double quotient(const Medium& md, double a, double b) {
  if (a == b) return dV(md, a);
  return (V(md, a) - V(md, b)) / (a - b);
}

// ---- Cartesian --------------------------------------------------------------------------------

struct Steps {
  double dx = 1.0, dy = 1.0, dz = 1.0, dt = 0.05;
};


inline double lap(const FieldLevel& u, const Steps& s, int m, int n, int p) {
  return (u(m + 1, n, p) - 2.0 * u(m, n, p) + u(m - 1, n, p)) / (s.dx * s.dx) +
         (u(m, n + 1, p) - 2.0 * u(m, n, p) + u(m, n - 1, p)) / (s.dy * s.dy) +
         (u(m, n, p + 1) - 2.0 * u(m, n, p) + u(m, n, p - 1)) / (s.dz * s.dz);
}

/// Left-hand side of the implicit scheme at one interior site.
inline double residual(const Medium& md, const Steps& s, const FieldLevel& um, const FieldLevel& u,
                       const FieldLevel& up, int m, int n, int p, double gamma) {
  const double a = up(m, n, p), b = um(m, n, p);
  return (a - 2.0 * u(m, n, p) + b) / (s.dt * s.dt) - md.c * md.c * lap(u, s, m, n, p) -
         md.beta * (lap(up, s, m, n, p) - lap(um, s, m, n, p)) / (2.0 * s.dt) +
         gamma * (a - b) / (2.0 * s.dt) + md.m2 / 2.0 * (a + b) + quotient(md, a, b) - md.J;
}

inline double hamiltonian(const Medium& md, const Steps& s, const FieldLevel& u,
                          const FieldLevel& up, int m, int n, int p) {
  const double a = up(m, n, p), b = u(m, n, p);
  const double ex = (up(m + 1, n, p) - a) * (u(m + 1, n, p) - b) / (s.dx * s.dx);
  const double ey = (up(m, n + 1, p) - a) * (u(m, n + 1, p) - b) / (s.dy * s.dy);
  const double ez = (up(m, n, p + 1) - a) * (u(m, n, p + 1) - b) / (s.dz * s.dz);
  return 0.5 * std::pow((a - b) / s.dt, 2) + 0.5 * md.c * md.c * (ex + ey + ez) +
         md.m2 / 2.0 * (a * a + b * b) / 2.0 + (V(md, a) + V(md, b)) / 2.0 - md.J * (a + b) / 2.0;
}

inline double energy(const Medium& md, const Steps& s, const FieldLevel& u, const FieldLevel& up) {
  const int N = u.n();
  const double dv = s.dx * s.dy * s.dz;
  double e = 0.0;
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n)
      for (int p = 1; p <= N; ++p) e += hamiltonian(md, s, u, up, m, n, p) * dv;
  double f = 0.0;
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      f += (up(1, i, j) - up(0, i, j)) * (u(1, i, j) - u(0, i, j)) / (s.dx * s.dx);
      f += (up(i, 1, j) - up(i, 0, j)) * (u(i, 1, j) - u(i, 0, j)) / (s.dy * s.dy);
      f += (up(i, j, 1) - up(i, j, 0)) * (u(i, j, 1) - u(i, j, 0)) / (s.dz * s.dz);
    }
  return e + 0.5 * md.c * md.c * f * dv;
}

/// Right-hand side of the discrete energy-rate identity; the gradient flux carries c^2.
template <class Gamma>
double rate_rhs(const Medium& md, const Steps& s, const FieldLevel& um, const FieldLevel& u,
                const FieldLevel& up, Gamma gamma) {
  const int N = u.n();
  const double dt = s.dt;
  auto w = [&](int m, int n, int p) { return up(m, n, p) - um(m, n, p); };
  double face = 0.0, bface = 0.0;
  for (int i = 1; i <= N; ++i)
    for (int j = 1; j <= N; ++j) {
      face += (u(1, i, j) - u(0, i, j)) / (s.dx * s.dx) * w(0, i, j) / (2 * dt) +
              (u(i, 1, j) - u(i, 0, j)) / (s.dy * s.dy) * w(i, 0, j) / (2 * dt) +
              (u(i, j, 1) - u(i, j, 0)) / (s.dz * s.dz) * w(i, j, 0) / (2 * dt);
      bface += (w(1, i, j) - w(0, i, j)) * w(0, i, j) / std::pow(2 * s.dx * dt, 2) +
               (w(i, 1, j) - w(i, 0, j)) * w(i, 0, j) / std::pow(2 * s.dy * dt, 2) +
               (w(i, j, 1) - w(i, j, 0)) * w(i, j, 0) / std::pow(2 * s.dz * dt, 2);
    }
  double bulk = 0.0, damp = 0.0;
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n)
      for (int p = 1; p <= N; ++p) {
        bulk += std::pow((w(m, n, p) - w(m - 1, n, p)) / (2 * s.dx * dt), 2) +
                std::pow((w(m, n, p) - w(m, n - 1, p)) / (2 * s.dy * dt), 2) +
                std::pow((w(m, n, p) - w(m, n, p - 1)) / (2 * s.dz * dt), 2);
        damp += gamma(m, n, p) * std::pow(w(m, n, p) / (2 * dt), 2);
      }
  return (-md.c * md.c * face - md.beta * (bulk + bface) - damp) * s.dx * s.dy * s.dz;
}

/// Dense Gaussian elimination with partial pivoting; a is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
    if (a[piv * n + c] == 0.0) throw std::runtime_error("singular dense system");
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r * n + c] / a[c * n + c];
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i * n + k] * x[k];
    x[i] = acc / a[i * n + i];
  }
  return x;
}

/// Next level from interior unknowns: driven faces at phi, ghosts copied from layer N.
inline FieldLevel assemble(int N, const std::vector<double>& x, double phi) {
  FieldLevel f(N);
  std::size_t i = 0;
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n)
      for (int p = 1; p <= N; ++p) f(m, n, p) = x[i++];
  for (int a = 0; a <= N + 1; ++a)
    for (int b = 0; b <= N + 1; ++b) {
      f(0, a, b) = phi;
      f(a, 0, b) = phi;
      f(a, b, 0) = phi;
    }
  // Ghost nodes (including edges and corners) copy the nearest layer-N node.
  for (int a = 0; a <= N + 1; ++a)
    for (int b = 0; b <= N + 1; ++b)
      for (int c = 0; c <= N + 1; ++c) {
        if (a == 0 || b == 0 || c == 0) continue;
        const int sa = std::min(a, N), sb = std::min(b, N), sc = std::min(c, N);
        f(a, b, c) = f(sa, sb, sc);
      }
  return f;
}

/// Solves a linear (V = Zero) implicit step by probing the residual with unit vectors.
template <class Gamma>
FieldLevel dense_linear_step(const Medium& md, const Steps& s, const FieldLevel& um,
                             const FieldLevel& u, double phi_next, Gamma gamma) {
  const int N = u.n();
  const std::size_t n = static_cast<std::size_t>(N) * N * N;
  auto eval = [&](const std::vector<double>& x) {
    const FieldLevel up = assemble(N, x, phi_next);
    std::vector<double> r;
    for (int m = 1; m <= N; ++m)
      for (int q = 1; q <= N; ++q)
        for (int p = 1; p <= N; ++p) r.push_back(residual(md, s, um, u, up, m, q, p, gamma(m, q, p)));
    return r;
  };
  const std::vector<double> r0 = eval(std::vector<double>(n, 0.0));
  std::vector<double> a(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const std::vector<double> rc = eval(e);
    for (std::size_t r = 0; r < n; ++r) a[r * n + c] = rc[r] - r0[r];
  }
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -r0[i];
  return assemble(N, solve_dense(a, rhs), phi_next);
}

/// Closed-form update of the linear explicit scheme (V = Zero, beta = 0).
template <class Gamma>
FieldLevel linear_explicit_step(const Medium& md, const Steps& s, const FieldLevel& um,
                                const FieldLevel& u, double phi_next, Gamma gamma) {
  const int N = u.n();
  std::vector<double> x;
  const double dt = s.dt;
  for (int m = 1; m <= N; ++m)
    for (int n = 1; n <= N; ++n)
      for (int p = 1; p <= N; ++p) {
        const double g = gamma(m, n, p);
        const double b = um(m, n, p);
        const double num = (2.0 * u(m, n, p) - b) / (dt * dt) + md.c * md.c * lap(u, s, m, n, p) +
                           g * b / (2.0 * dt) - md.m2 / 2.0 * b + md.J;
        x.push_back(num / (1.0 / (dt * dt) + g / (2.0 * dt) + md.m2 / 2.0));
      }
  return assemble(N, x, phi_next);
}

// ---- radial -----------------------------------------------------------------------------------

struct Radial {
  Medium md;
  double eps = 0.02, dr = 0.02, dt = 0.02;
  int M = 5;
  double r(int j) const { return eps + j * dr; }
};

template <class Gamma>
double radial_residual(const Radial& g, const std::vector<double>& vm, const std::vector<double>& v,
                       const std::vector<double>& vp, int j, Gamma gamma) {
  const Medium& md = g.md;
  const double r = g.r(j);
  const double a = vp[j], b = vm[j];
  const double pot = a == b ? r * dV(md, a / r) : r * r * (V(md, a / r) - V(md, b / r)) / (a - b);
  const double d2p = vp[j + 1] - 2 * vp[j] + vp[j - 1];
  const double d2m = vm[j + 1] - 2 * vm[j] + vm[j - 1];
  return (a - 2 * v[j] + b) / (g.dt * g.dt) - (v[j + 1] - 2 * v[j] + v[j - 1]) / (g.dr * g.dr) +
         gamma(r) * (a - b) / (2 * g.dt) - md.beta * (d2p - d2m) / (2 * g.dt * g.dr * g.dr) +
         md.m2 / 2 * (a + b) + pot - md.J * r;
}

inline double radial_energy(const Radial& g, const std::vector<double>& v,
                            const std::vector<double>& vp) {
  const Medium& md = g.md;
  double e = 0.0;
  for (int j = 0; j <= g.M - 1; ++j) {
    e += 0.5 * std::pow((vp[j] - v[j]) / g.dt, 2) * g.dr;
    e += 0.5 * (vp[j + 1] - vp[j]) / g.dr * (v[j + 1] - v[j]) / g.dr * g.dr;
    e += md.m2 / 2 * (vp[j] * vp[j] + v[j] * v[j]) / 2 * g.dr;
    e -= md.J * g.r(j) * (vp[j] + v[j]) / 2 * g.dr;
  }
  for (int j = 1; j <= g.M - 1; ++j) {
    const double r = g.r(j);
    e += r * r * (V(md, vp[j] / r) + V(md, v[j] / r)) / 2 * g.dr;
  }
  return e;
}

/// Linear radial step through a dense solve; v_0 = origin, v_{M+1} = kappa v_M.
template <class Gamma>
std::vector<double> dense_radial_step(const Radial& g, const std::vector<double>& vm,
                                      const std::vector<double>& v, double origin, double kappa,
                                      Gamma gamma) {
  const auto n = static_cast<std::size_t>(g.M);
  auto level = [&](const std::vector<double>& x) {
    std::vector<double> out(n + 2);
    out[0] = origin;
    for (std::size_t i = 0; i < n; ++i) out[i + 1] = x[i];
    out[n + 1] = kappa * out[n];
    return out;
  };
  auto eval = [&](const std::vector<double>& x) {
    const auto vp = level(x);
    std::vector<double> r(n);
    for (int j = 1; j <= g.M; ++j) r[static_cast<std::size_t>(j - 1)] = radial_residual(g, vm, v, vp, j, gamma);
    return r;
  };
  const auto r0 = eval(std::vector<double>(n, 0.0));
  std::vector<double> a(n * n);
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> e(n, 0.0);
    e[c] = 1.0;
    const auto rc = eval(e);
    for (std::size_t r = 0; r < n; ++r) a[r * n + c] = rc[r] - r0[r];
  }
  std::vector<double> rhs(n);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = -r0[i];
  return level(solve_dense(a, rhs));
}

// ---- helpers ----------------------------------------------------------------------------------

inline FieldLevel random_level(int N, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> d(-amp, amp);
  FieldLevel f(N);
  for (double& x : f.values()) x = d(rng);
  return f;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> d(-amp, amp);
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

}  // namespace oracle
