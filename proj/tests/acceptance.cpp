// Acceptance checks. Usage: acceptance <criterion 1..9>
// Prints one PASS/FAIL line for the criterion and exits non-zero on failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "nlwave/energy3d.hpp"
#include "nlwave/experiments.hpp"
#include "nlwave/io.hpp"
#include "nlwave/radial.hpp"
#include "nlwave/solver3d.hpp"
#include "nlwave/stability.hpp"
#include "oracles.hpp"

using namespace nlwave;
using testing_support::medium;
using testing_support::to_oracle;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

constexpr double kPi = std::numbers::pi;

// 1. Discrete energy-rate identity on a driven, damped 4^3 lattice.
Outcome energy_identity() {
  const MediumParams md = medium(PotentialKind::SineGordon, 0.1, 0.05);
  const Problem3D pr(md, Grid3{4, 1, 1, 1}, TimeGrid{0.05, 201}, DampingProfile::uniform(),
                     DrivingSignal::ramped_sine(1.2, 0.9, 2 * kPi / 0.9));
  NewtonSettings ns;
  ns.tol_residual = 1e-12;
  SimState3D s = make_rest_state(pr);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const FieldLevel um = s.prev, u = s.curr;
    step(pr, s, ns);
    const EnergyReport r = energy_rate_report(pr, um, u, s.curr, ns.tol_residual);
    worst = std::max(worst, r.residual / std::max({1.0, std::abs(r.e_curr), std::abs(r.rate_lhs)}));
  }
  return {worst <= 1e-9, "max scaled |lhs-rhs| = " + fmt(worst) + " (bound 1e-9)"};
}

FieldLevel smooth_field(int n, std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double c[3][3][3];
  for (auto& a : c)
    for (auto& b : a)
      for (double& x : b) x = d(rng);
  FieldLevel f(n);
  const double h = 1.0 / (n + 0.5);
  for (int m = 1; m <= n; ++m)
    for (int q = 1; q <= n; ++q)
      for (int p = 1; p <= n; ++p) {
        double v = 0.0;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              const double kx = (2 * i + 1) * kPi / 2, ky = (2 * j + 1) * kPi / 2,
                           kz = (2 * k + 1) * kPi / 2;
              v += c[i][j][k] / ((i + 1) * (j + 1) * (k + 1)) * std::sin(kx * m * h) *
                   std::sin(ky * q * h) * std::sin(kz * p * h);
            }
        f(m, q, p) = amp * v;
      }
  return f;
}

// 2. Conservation with no damping, no source and a static boundary.
Outcome conservation() {
  const Problem3D pr(medium(PotentialKind::SineGordon), Grid3{16, 1, 1, 1}, TimeGrid{0.05, 1001},
                     DampingProfile::uniform(), DrivingSignal::silent());
  std::mt19937_64 rng(2024);
  const FieldLevel u0 = smooth_field(16, rng, 0.5);
  SimState3D s = make_state(pr, u0, u0);
  const double e0 = total_energy(pr, s.prev, s.curr);
  double drift = 0.0;
  for (int i = 0; i < 1000; ++i) {
    step(pr, s);
    drift = std::max(drift, std::abs(total_energy(pr, s.prev, s.curr) - e0) / std::abs(e0));
  }
  return {drift <= 1e-8, "E0 = " + fmt(e0) + ", max relative drift = " + fmt(drift) + " (bound 1e-8)"};
}

// 3. Stability dichotomy for the checkerboard mode.
Outcome stability_dichotomy() {
  const MediumParams md = medium(PotentialKind::Zero);
  const Grid3 grid{16, 1, 1, 1};
  const double amp = 1e-3;
  auto run = [&](double dt, double& peak) {
    const Problem3D pr(md, grid, TimeGrid{dt, 2001}, DampingProfile::uniform(), DrivingSignal::silent());
    FieldLevel u0(16);
    for (int m = 1; m <= 16; ++m)
      for (int q = 1; q <= 16; ++q)
        for (int p = 1; p <= 16; ++p) u0(m, q, p) = ((m + q + p) % 2 ? -amp : amp);
    // Symmetric start u^1 = u^{-1} for the mode: u^1 = (1 - 6 dt^2) u^0.
    FieldLevel u1 = u0;
    for (double& x : u1.values()) x *= 1.0 - 6.0 * dt * dt;
    SimState3D s = make_state(pr, u0, u1);
    peak = s.curr.interior_sup();
    for (int i = 0; i < 2000; ++i) {
      step(pr, s);
      peak = std::max(peak, s.curr.interior_sup());
      if (!(peak <= 1e6)) return i + 1;
    }
    return 2000;
  };
  double stable_peak = 0.0, unstable_peak = 0.0;
  run(0.55, stable_peak);
  const int blowup_step = run(0.60, unstable_peak);
  const bool checker_ok = check_cartesian(md, grid, 0.55).satisfied && !check_cartesian(md, grid, 0.60).satisfied;
  const bool pass = stable_peak <= 10 * amp && !(unstable_peak <= 1e6) && checker_ok;
  return {pass, "dt=0.55 peak/initial = " + fmt(stable_peak / amp) + "; dt=0.60 exceeds 1e6 at step " +
                    std::to_string(blowup_step) + "; checker " + (checker_ok ? "agrees" : "disagrees")};
}

// 4. Observed order with a manufactured damped linear mode.
Outcome consistency_order() {
  const double beta = 0.02, gamma = 0.1, m2 = 0.5;
  const double k = kPi / 2;
  const double a = (gamma + 3 * beta * k * k) / 2;
  const double w = std::sqrt(3 * k * k + m2 - a * a);
  const auto T = [&](double t) { return std::exp(-a * t) * std::cos(w * t); };
  std::vector<double> hs, errs;
  for (int n : {9, 19, 39}) {
    const double h = 1.0 / (n + 0.5);
    const double dt = 0.5 * h;
    const long steps = std::lround(1.0 / dt);
    const Problem3D pr(medium(PotentialKind::Zero, beta, gamma, m2), Grid3{n, h, h, h},
                       TimeGrid{dt, steps}, DampingProfile::uniform(), DrivingSignal::silent());
    auto exact = [&](double t) {
      FieldLevel f(n);
      for (int m = 1; m <= n; ++m)
        for (int q = 1; q <= n; ++q)
          for (int p = 1; p <= n; ++p)
            f(m, q, p) = T(t) * std::sin(k * m * h) * std::sin(k * q * h) * std::sin(k * p * h);
      return f;
    };
    SimState3D s = make_state(pr, exact(0.0), exact(dt));
    while (s.k < steps) step(pr, s);
    const FieldLevel want = exact(steps * dt);
    double err = 0.0;
    for (int m = 1; m <= n; ++m)
      for (int q = 1; q <= n; ++q)
        for (int p = 1; p <= n; ++p) err = std::max(err, std::abs(s.curr(m, q, p) - want(m, q, p)));
    hs.push_back(h);
    errs.push_back(err);
  }
  const double p1 = std::log(errs[0] / errs[1]) / std::log(hs[0] / hs[1]);
  const double p2 = std::log(errs[1] / errs[2]) / std::log(hs[1] / hs[2]);
  const bool pass = std::abs(p1 - 2.0) <= 0.3 && std::abs(p2 - 2.0) <= 0.3;
  return {pass, "errors " + fmt(errs[0]) + ", " + fmt(errs[1]) + ", " + fmt(errs[2]) +
                    "; observed orders " + fmt(p1) + ", " + fmt(p2) + " (target 2 +- 0.3)"};
}

// 5. Explicit and implicit paths agree when beta = 0.
Outcome explicit_implicit() {
  const Problem3D pr(medium(PotentialKind::SineGordon, 0.0, 0.02, 0.0, 0.01), Grid3{4, 1, 1, 1},
                     TimeGrid{0.05, 101}, DampingProfile::uniform(),
                     DrivingSignal::ramped_sine(1.4, 0.9, 2 * kPi / 0.9));
  SimState3D a = make_rest_state(pr), b = a;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    step_explicit(pr, a);
    step_implicit(pr, b);
    worst = std::max(worst, testing_support::max_diff(a.curr, b.curr));
  }
  return {worst <= 1e-10, "max |explicit - implicit| = " + fmt(worst) + " (bound 1e-10), sup u = " +
                              fmt(a.curr.interior_sup())};
}

// 6. Supratransmission jump at desk scale.
Outcome supratransmission() {
  SweepSpec spec;
  spec.base.medium = medium(PotentialKind::SineGordon);
  spec.base.grid = Grid3{50, 1, 1, 1};
  spec.base.time = TimeGrid{0.05, 2000};
  spec.base.damping = DampingProfile::lattice_absorbing(15);
  spec.base.monitor = {15, 15, 15};
  spec.base.sample_every = 0;
  spec.omega = 0.9;
  for (int i = 0; i <= 10; ++i) spec.amplitudes.push_back(1.2 + 0.05 * i);
  spec.ramp_periods = 5.0;
  spec.jump_threshold = 3.0;
  const SweepResult r = supra_sweep(spec);
  std::string table;
  for (const SweepRow& row : r.rows) table += " " + fmt(row.amplitude) + ":" + fmt(row.integral);
  const bool ok = r.jump.unique();
  std::string where = "none";
  if (r.jump.location >= 0) {
    where = fmt(r.rows[static_cast<std::size_t>(r.jump.location)].amplitude) + "->" +
            fmt(r.rows[static_cast<std::size_t>(r.jump.location) + 1].amplitude);
  }
  return {ok, "jumps >= 3: " + std::to_string(r.jump.count_above) + ", largest ratio " +
                  fmt(r.jump.largest_ratio) + " at A " + where + "; E(A):" + table};
}

// 7. No jump in the radial problem.
Outcome radial_smoothness() {
  ScanSpec spec;
  spec.base.epsilon = 0.02;
  spec.base.dr = 0.02;
  spec.base.dt = 0.02;
  spec.base.m_nodes = 298;
  spec.base.medium = medium(PotentialKind::SineGordon);
  spec.base.damping = DampingProfile::radial_absorbing();
  spec.omegas = {0.9};
  for (int a = 0; a <= 20; ++a) spec.amplitudes.push_back(a);
  spec.t_end = 20.0;
  const ScanResult r = radial_scan(spec);
  const SmoothnessReport& s = r.smoothness.at(0);
  double worst_residual = 0.0;
  for (const ScanRow& row : r.rows) worst_residual = std::max(worst_residual, row.max_residual);
  return {s.smooth, "max normalized ratio " + fmt(s.max_normalized_ratio) + " (bound 1.5), raw ratio " +
                        fmt(s.max_raw_ratio) + ", monotone " + (s.monotone ? "yes" : "no") +
                        ", E(20) = " + fmt(r.rows.back().energy) + ", closed-identity residual " +
                        fmt(worst_residual)};
}

// 8. Four transmitted bits produce four peaks one period apart.
Outcome bit_transmission() {
  BitSignalSpec spec;
  spec.base.medium = medium(PotentialKind::SineGordon, 0.0, 0.005, 0.0, 0.01);
  spec.base.grid = Grid3{50, 1, 1, 1};
  const char* dt_env = std::getenv("NLWAVE_BITS_DT");
  spec.base.time = TimeGrid{dt_env ? std::atof(dt_env) : 0.005, 1};
  spec.base.damping = DampingProfile::lattice_absorbing(15);
  spec.base.monitor = {15, 15, 15};
  spec.base.sample_every = 0;
  spec.bits = {1, 1, 1, 1};
  spec.period = 150.0;
  spec.amp_factor = 3.0;
  spec.omega = 0.9;
  const BitsResult r = transmit_bits(spec);
  const auto& t = r.peaks.times;
  bool spacing_ok = t.size() == 4;
  std::string list;
  for (std::size_t i = 0; i < t.size(); ++i) {
    list += " " + fmt(t[i]);
    if (i > 0 && std::abs(t[i] - t[i - 1] - spec.period) > 0.1 * spec.period) spacing_ok = false;
  }
  return {spacing_ok, "dt = " + fmt(spec.base.time.dt) + ", " + std::to_string(t.size()) +
                          " peaks at" + list + " (background " + fmt(r.peaks.background) + ")"};
}

// 9. Library kernels against the dense transcriptions.
Outcome oracle_equivalence() {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto kind = static_cast<PotentialKind>(trial % 3);
    MediumParams md = medium(kind, 0.05 * (trial % 4), 0.1, 0.3, 0.02, 1.0 + 0.05 * trial);
    md.potential.lambda = 0.5;
    const Grid3 g{2, 0.9, 1.1, 1.05};
    const double dt = 0.04;
    const Problem3D pr(md, g, TimeGrid{dt, 10}, DampingProfile::uniform(), DrivingSignal::silent());
    const FieldLevel a = oracle::random_level(2, rng), b = oracle::random_level(2, rng),
                     c = oracle::random_level(2, rng);
    const auto om = to_oracle(md);
    const auto os = to_oracle(g, dt);
    const InteriorField r = scheme_residual(pr, a, b, c);
    const InteriorField sc = scheme_residual_scale(pr, a, b, c);
    for (int m = 1; m <= 2; ++m)
      for (int q = 1; q <= 2; ++q)
        for (int p = 1; p <= 2; ++p) {
          const double want = oracle::residual(om, os, a, b, c, m, q, p, md.gamma);
          worst = std::max(worst, std::abs(r(m, q, p) - want) / std::max(1.0, sc(m, q, p)));
          const double h = oracle::hamiltonian(om, os, b, c, m, q, p);
          worst = std::max(worst, std::abs(site_hamiltonian(pr, b, c, m, q, p) - h) / std::max(1.0, std::abs(h)));
        }
    const double e = oracle::energy(om, os, b, c);
    worst = std::max(worst, std::abs(total_energy(pr, b, c) - e) / std::max(1.0, std::abs(e)));
    const double rr = oracle::rate_rhs(om, os, a, b, c, [&](int, int, int) { return md.gamma; });
    worst = std::max(worst, std::abs(energy_rate_rhs(pr, a, b, c).rate_rhs - rr) / std::max(1.0, std::abs(rr)));

    RadialParams rp;
    rp.m_nodes = 5;
    rp.dr = 0.9;
    rp.medium = md;
    rp.damping = DampingProfile::radial_absorbing();
    const RadialProblem rpr(rp);
    oracle::Radial og;
    og.md = om;
    og.eps = rp.epsilon;
    og.dr = rp.dr;
    og.dt = rp.dt;
    og.M = 5;
    const auto va = oracle::random_vector(7, rng), vb = oracle::random_vector(7, rng),
               vc = oracle::random_vector(7, rng);
    const auto res = radial_residual(rpr, va, vb, vc);
    const double scale = 4.0 / (rp.dt * rp.dt);
    for (int j = 1; j <= 5; ++j) {
      const double want = oracle::radial_residual(og, va, vb, vc, j, [&](double rad) {
        return eval_damping_radius(rp.damping, md.gamma, rad);
      });
      worst = std::max(worst, std::abs(res[static_cast<std::size_t>(j - 1)] - want) / scale);
    }
    const double re = oracle::radial_energy(og, vb, vc);
    worst = std::max(worst, std::abs(radial_energy(rpr, vb, vc) - re) / std::max(1.0, std::abs(re)));
  }
  return {worst <= 1e-13, "max scaled deviation " + fmt(worst) + " (bound 1e-13)"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..9>\n");
    return 2;
  }
  const int id = std::atoi(argv[1]);
  const std::vector<std::pair<const char*, std::function<Outcome()>>> table = {
      {"energy identity", energy_identity},
      {"conservation", conservation},
      {"stability dichotomy", stability_dichotomy},
      {"consistency order", consistency_order},
      {"explicit/implicit equivalence", explicit_implicit},
      {"supratransmission jump", supratransmission},
      {"radial smoothness", radial_smoothness},
      {"bit transmission", bit_transmission},
      {"oracle equivalence", oracle_equivalence},
  };
  if (id < 1 || id > static_cast<int>(table.size())) {
    std::fprintf(stderr, "unknown criterion %s\n", argv[1]);
    return 2;
  }
  const auto& [name, fn] = table[static_cast<std::size_t>(id - 1)];
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = fn();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d (%s): %s [%.1f s]\n", out.pass ? "PASS" : "FAIL", id, name,
              out.detail.c_str(), secs);
  return out.pass ? 0 : 1;
}
