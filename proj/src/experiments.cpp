#include "nlwave/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_increasing(const std::vector<double>& xs, const std::string& name) {
  if (xs.empty()) throw ContractError(name + " must be nonempty");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i])) throw ContractError(name + " must be finite");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw ContractError(name + " must be strictly increasing");
  }
}

}  // namespace

void run_jobs(int jobs, std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  const auto threads = static_cast<std::size_t>(std::max(1, jobs));
  if (threads == 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex guard;
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(guard);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    worker();
  }
  if (failure) std::rethrow_exception(failure);
}

void RunConfig::validate() const {
  medium.validate();
  grid.validate();
  time.validate();
  damping.validate();
  signal.validate();
  newton.validate();
  for (int c : monitor) {
    if (c < 1 || c > grid.n) throw RangeError("monitor site outside interior 1..N");
  }
  if (sample_every < 0) throw ContractError("output.sample_every must be >= 0");
  if (workers < 1) throw ContractError("threads must be >= 1");
}

SimulationResult run_simulation(const RunConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Problem3D problem(config.medium, config.grid, config.time, config.damping,
                          config.signal);
  const auto [mi, ni, pi] = config.monitor;
  const double dt = problem.dt();

  SimulationResult out;
  out.site.site = config.monitor;
  out.site.dt = dt;
  const long total = config.time.steps;
  out.site.times.reserve(static_cast<std::size_t>(total));
  out.site.hamiltonian.reserve(static_cast<std::size_t>(total));
  out.u_site.reserve(static_cast<std::size_t>(total));

  std::vector<double> pending = config.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snap = 0;
  const auto snapshot = [&](const FieldLevel& level, long k) {
    const double t = problem.time_at(k);
    while (next_snap < pending.size() && pending[next_snap] < t - 0.5 * dt) ++next_snap;
    if (next_snap < pending.size() && std::abs(pending[next_snap] - t) <= 0.5 * dt) {
      out.snapshots.push_back({t, level});
      ++next_snap;
    }
  };

  SimState3D state = make_rest_state(problem);
  snapshot(state.prev, 0);
  snapshot(state.curr, 1);
  const auto record = [&](long k) {
    const double h = site_hamiltonian(problem, state.prev, state.curr, mi, ni, pi);
    const double u = state.prev(mi, ni, pi);
    out.site.append(problem.time_at(k), h);
    out.u_site.push_back(u);
    out.max_abs_u_site = std::max(out.max_abs_u_site, std::abs(u));
  };
  record(0);

  FieldLevel older;
  while (state.k < total) {
    const long k = state.k;
    const bool sample = config.sample_every > 0 && k % config.sample_every == 0;
    if (sample) older = state.prev;
    const StepStats stats = step(problem, state, config.newton, config.workers);
    out.max_scheme_residual = std::max(out.max_scheme_residual, stats.scaled_residual);
    record(k);
    snapshot(state.curr, state.k);
    if (sample) {
      const EnergyReport rep = energy_rate_report(problem, older, state.prev, state.curr,
                                                  config.newton.tol_residual, config.workers);
      SeriesRow row;
      row.t = problem.time_at(k);
      row.u_site = state.prev(mi, ni, pi);
      row.h_site = out.site.hamiltonian.back();
      row.e_total = rep.e_curr;
      row.rate_lhs = rep.rate_lhs;
      row.rate_rhs = rep.rate_rhs;
      row.residual = rep.residual;
      out.rows.push_back(row);
      const double scale = std::max({1.0, std::abs(rep.e_curr), std::abs(rep.rate_lhs)});
      out.max_rate_residual = std::max(out.max_rate_residual, rep.residual / scale);
    }
  }
  out.steps = total;
  out.wall_seconds = seconds_since(start);
  return out;
}

JumpReport detect_jump(const std::vector<double>& energies, double threshold) {
  JumpReport rep;
  rep.threshold = threshold;
  for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
    if (!(energies[i] > 0.0)) continue;
    const double ratio = energies[i + 1] / energies[i];
    if (ratio > rep.largest_ratio) {
      rep.largest_ratio = ratio;
      rep.location = static_cast<int>(i);
    }
    if (ratio >= threshold) ++rep.count_above;
  }
  return rep;
}

void SweepSpec::validate() const {
  require_increasing(amplitudes, "sweep.amplitudes");
  if (!(omega > 0.0)) throw ContractError("sweep.omega must be > 0");
  if (!in_band_gap(omega, base.medium.mass_sq)) {
    throw ContractError("sweep.omega must lie in the forbidden band-gap (omega < sqrt(m2 + 1))");
  }
  if (!(ramp_periods >= 0.0)) throw ContractError("sweep.ramp_periods must be >= 0");
  if (!(jump_threshold > 1.0)) throw ContractError("sweep.jump_threshold must be > 1");
  if (jobs < 1) throw ContractError("jobs must be >= 1");
}

SweepResult supra_sweep(const SweepSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  SweepResult result;
  result.rows.resize(spec.amplitudes.size());
  run_jobs(spec.jobs, spec.amplitudes.size(), [&](std::size_t i) {
    SweepRow& row = result.rows[i];
    row.amplitude = spec.amplitudes[i];
    RunConfig cfg = spec.base;
    cfg.signal = DrivingSignal::ramped_sine(row.amplitude, spec.omega,
                                            spec.ramp_periods * 2.0 * std::numbers::pi / spec.omega);
    try {
      const SimulationResult sim = run_simulation(cfg);
      row.integral = sim.site.integral;
      row.max_residual = sim.max_rate_residual;
      row.max_abs_u = sim.max_abs_u_site;
    } catch (const std::exception& e) {
      row.integral = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("failed: ") + e.what();
    }
  });
  std::vector<double> energies;
  for (const SweepRow& r : result.rows) energies.push_back(r.integral);
  result.jump = detect_jump(energies, spec.jump_threshold);
  result.wall_seconds = seconds_since(start);
  return result;
}

RadialRunResult run_radial(const RadialRunConfig& config) {
  RadialParams params = config.params;
  const double dt = params.dt;
  const long warm = std::lround(config.warmup / dt);
  const long span = std::lround(config.t_end / dt);
  if (span < 1) throw ContractError("radial t_end must cover at least one step");
  params.t0 = -static_cast<double>(warm) * dt;
  params.steps = warm + span + 1;
  const RadialProblem problem(params);

  RadialRunResult out;
  RadialState state = make_radial_state(problem);
  const double half_pi = std::numbers::pi / 2.0;
  const auto record = [&](long k) {
    if (k < warm || k >= warm + span) return;
    const double e = half_pi * radial_energy(problem, state.prev, state.curr);
    out.times.push_back(problem.time_at(k));
    out.energy.push_back(e);
    out.integral += e * dt;
  };
  record(0);
  while (state.k < params.steps) {
    const long k = state.k;
    std::vector<double> older = state.prev;
    const StepStats stats = step_radial(problem, state, config.newton);
    out.max_scheme_residual = std::max(out.max_scheme_residual, stats.scaled_residual);
    record(k);
    const double e1 = radial_energy_closed(problem, state.prev, state.curr);
    const double e0 = radial_energy_closed(problem, older, state.prev);
    const double lhs = (e1 - e0) / dt;
    const double rhs = radial_closed_rate_rhs(problem, older, state.prev, state.curr);
    const double scale = std::max({1.0, std::abs(e1), std::abs(lhs)});
    out.max_closed_residual = std::max(out.max_closed_residual, std::abs(lhs - rhs) / scale);
  }
  out.steps = params.steps;
  return out;
}

void ScanSpec::validate() const {
  require_increasing(omegas, "scan.omegas");
  require_increasing(amplitudes, "scan.amplitudes");
  if (base.medium.potential.kind != PotentialKind::SineGordon &&
      base.medium.potential.kind != PotentialKind::KleinGordon) {
    throw ContractError("radial scan supports sine-Gordon or Klein-Gordon potentials");
  }
  for (double w : omegas) {
    if (!(w > 0.0)) throw ContractError("scan.omegas must be > 0");
  }
  if (!(t_end > 0.0)) throw ContractError("scan.t_end must be > 0");
  if (!(warmup_periods >= 0.0)) throw ContractError("scan.warmup_periods must be >= 0");
  if (jobs < 1) throw ContractError("jobs must be >= 1");
}

SmoothnessReport assess_smoothness(double omega, const std::vector<double>& amplitudes,
                                   const std::vector<double>& energies, double bound) {
  SmoothnessReport rep;
  rep.omega = omega;
  for (std::size_t i = 0; i + 1 < energies.size(); ++i) {
    if (energies[i + 1] < energies[i]) rep.monotone = false;
    if (energies[i] > 0.0) rep.max_raw_ratio = std::max(rep.max_raw_ratio, energies[i + 1] / energies[i]);
    const double a0 = amplitudes[i], a1 = amplitudes[i + 1];
    if (a0 > 0.0 && energies[i] > 0.0 && energies[i + 1] > 0.0) {
      const double n0 = energies[i] / (a0 * a0);
      const double n1 = energies[i + 1] / (a1 * a1);
      rep.max_normalized_ratio = std::max({rep.max_normalized_ratio, n1 / n0, n0 / n1});
    }
  }
  rep.smooth = rep.max_normalized_ratio <= bound && rep.monotone;
  return rep;
}

ScanResult radial_scan(const ScanSpec& spec) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t na = spec.amplitudes.size();
  ScanResult result;
  result.rows.resize(spec.omegas.size() * na);
  run_jobs(spec.jobs, result.rows.size(), [&](std::size_t idx) {
    ScanRow& row = result.rows[idx];
    row.omega = spec.omegas[idx / na];
    row.amplitude = spec.amplitudes[idx % na];
    const double warmup = spec.warmup_periods * 2.0 * std::numbers::pi / row.omega;
    RadialRunConfig cfg;
    cfg.params = spec.base;
    cfg.params.signal = DrivingSignal::ramped_sine(row.amplitude, row.omega, warmup, warmup);
    cfg.t_end = spec.t_end;
    cfg.warmup = warmup;
    try {
      const RadialRunResult run = run_radial(cfg);
      row.energy = run.integral;
      row.max_residual = run.max_closed_residual;
    } catch (const std::exception& e) {
      row.energy = std::numeric_limits<double>::quiet_NaN();
      row.status = std::string("failed: ") + e.what();
    }
  });
  for (std::size_t w = 0; w < spec.omegas.size(); ++w) {
    std::vector<double> energies;
    for (std::size_t a = 0; a < na; ++a) energies.push_back(result.rows[w * na + a].energy);
    result.smoothness.push_back(
        assess_smoothness(spec.omegas[w], spec.amplitudes, energies, spec.smooth_bound));
  }
  result.wall_seconds = seconds_since(start);
  return result;
}

void BitSignalSpec::validate() const {
  if (bits.empty()) throw ContractError("bits must be nonempty");
  if (!(period > 0.0)) throw ContractError("period must be > 0");
  if (!(t_end >= 0.0)) throw ContractError("t_end must be >= 0");
  if (!(peaks.background_factor > 0.0) || !(peaks.min_separation > 0.0)) {
    throw ContractError("peak settings must be positive");
  }
  DrivingSignal::bit_sequence(bits, period, amp_factor, omega).validate();
}

std::vector<double> smooth_series(const std::vector<double>& values, long window) {
  const long n = static_cast<long>(values.size());
  std::vector<double> out(values.size());
  if (n == 0) return out;
  const long half = std::max(0L, window / 2);
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (long i = 0; i < n; ++i) prefix[static_cast<std::size_t>(i + 1)] = prefix[static_cast<std::size_t>(i)] + values[static_cast<std::size_t>(i)];
  for (long i = 0; i < n; ++i) {
    const long lo = std::max(0L, i - half);
    const long hi = std::min(n, i + half + 1);
    out[static_cast<std::size_t>(i)] =
        (prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]) /
        static_cast<double>(hi - lo);
  }
  return out;
}

PeakTable find_peaks(const SiteSeries& series, double drive_period, double bit_period,
                     const PeakSettings& settings) {
  PeakTable table;
  const std::size_t n = series.hamiltonian.size();
  if (n < 3 || !(series.dt > 0.0)) return table;
  const long window = std::max(1L, std::lround(drive_period / series.dt));
  const std::vector<double> s = smooth_series(series.hamiltonian, window);

  std::vector<double> sorted = s;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<long>(n / 2), sorted.end());
  table.background = sorted[n / 2];
  const double floor = settings.background_factor * std::max(0.0, table.background);

  std::vector<std::size_t> candidates;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (s[i] > floor && s[i] > 0.0 && s[i] >= s[i - 1] && s[i] > s[i + 1]) candidates.push_back(i);
  }
  std::sort(candidates.begin(), candidates.end(),
            [&](std::size_t a, std::size_t b) { return s[a] > s[b] || (s[a] == s[b] && a < b); });
  const double gap = settings.min_separation * bit_period;
  std::vector<std::size_t> accepted;
  for (std::size_t c : candidates) {
    const bool clear = std::none_of(accepted.begin(), accepted.end(), [&](std::size_t a) {
      return std::abs(series.times[a] - series.times[c]) < gap;
    });
    if (clear) accepted.push_back(c);
  }
  std::sort(accepted.begin(), accepted.end());
  for (std::size_t a : accepted) {
    table.times.push_back(series.times[a]);
    table.values.push_back(s[a]);
  }
  return table;
}

BitsResult transmit_bits(const BitSignalSpec& spec) {
  spec.validate();
  RunConfig cfg = spec.base;
  cfg.signal = DrivingSignal::bit_sequence(spec.bits, spec.period, spec.amp_factor, spec.omega);
  const double t_end = spec.t_end > 0.0
                           ? spec.t_end
                           : static_cast<double>(spec.bits.size() + 1) * spec.period;
  cfg.time.steps = std::max(1L, std::lround(t_end / cfg.time.dt));
  BitsResult out;
  out.run = run_simulation(cfg);
  out.peaks = find_peaks(out.run.site, cfg.signal.driving_period(), spec.period, spec.peaks);
  return out;
}

}  // namespace nlwave
