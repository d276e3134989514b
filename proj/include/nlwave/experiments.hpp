#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nlwave/energy3d.hpp"
#include "nlwave/radial.hpp"
#include "nlwave/solver3d.hpp"

namespace nlwave {

/// Everything needed to run one Cartesian simulation from rest.
struct RunConfig {
  MediumParams medium{};
  Grid3 grid{};
  TimeGrid time{};
  DampingProfile damping{};
  DrivingSignal signal{};
  std::array<int, 3> monitor{1, 1, 1};
  /// Energy report every this many steps; 0 disables the total-energy diagnostics.
  long sample_every = 1;
  std::vector<double> snapshot_times;
  NewtonSettings newton{};
  int workers = 1;

  void validate() const;
};

struct SeriesRow {
  double t = 0.0;
  double u_site = 0.0;
  double h_site = 0.0;
  double e_total = 0.0;
  double rate_lhs = 0.0;
  double rate_rhs = 0.0;
  double residual = 0.0;
};

struct Snapshot {
  double t = 0.0;
  FieldLevel level;
};

struct SimulationResult {
  SiteSeries site;
  /// u at the monitor site for every recorded H^k (level k).
  std::vector<double> u_site;
  std::vector<SeriesRow> rows;
  std::vector<Snapshot> snapshots;
  /// max over samples of residual / max(1, |E^k|, |rate_lhs|).
  double max_rate_residual = 0.0;
  /// max over steps of the Newton scaled residual.
  double max_scheme_residual = 0.0;
  double max_abs_u_site = 0.0;
  long steps = 0;
  double wall_seconds = 0.0;
};

/// Steps from rest to time.steps, recording H^k at the monitor for k = 0..steps-1.
SimulationResult run_simulation(const RunConfig& config);

// ---- supratransmission sweep ---------------------------------------------------------------

struct JumpReport {
  double threshold = 3.0;
  double largest_ratio = 0.0;
  /// Row i such that the largest ratio is E[i+1] / E[i]; -1 when undefined.
  int location = -1;
  int count_above = 0;
  bool unique() const { return count_above == 1; }
};

struct SweepSpec {
  RunConfig base{};
  double omega = 0.9;
  std::vector<double> amplitudes;
  /// Linear ramp length in driving periods.
  double ramp_periods = 10.0;
  double jump_threshold = 3.0;
  /// Concurrent amplitude jobs.
  int jobs = 1;

  void validate() const;
};

struct SweepRow {
  double amplitude = 0.0;
  double integral = 0.0;
  double max_residual = 0.0;
  double max_abs_u = 0.0;
  std::string status = "ok";
};

struct SweepResult {
  std::vector<SweepRow> rows;
  JumpReport jump;
  double wall_seconds = 0.0;
};

/// Adjacent ratios E[i+1]/E[i] over rows with E[i] > 0.
JumpReport detect_jump(const std::vector<double>& energies, double threshold);

SweepResult supra_sweep(const SweepSpec& spec);

// ---- radial scan -----------------------------------------------------------------------------

struct RadialRunConfig {
  RadialParams params{};
  double t_end = 20.0;
  /// Ramp occupying [-warmup, 0]; 0 starts at full amplitude.
  double warmup = 0.0;
  NewtonSettings newton{};
};

struct RadialRunResult {
  std::vector<double> times;
  /// (pi/2) E^k with the printed discrete energy, for t_k >= 0.
  std::vector<double> energy;
  /// Time integral of energy over [0, t_end] (left-endpoint sum).
  double integral = 0.0;
  /// max over steps of closed-identity residual / max(1, |E_closed|, |rate|).
  double max_closed_residual = 0.0;
  double max_scheme_residual = 0.0;
  long steps = 0;
};

/// Builds params for a ramped sine with the given warmup and runs to t_end.
RadialRunResult run_radial(const RadialRunConfig& config);

struct ScanSpec {
  RadialParams base{};
  std::vector<double> omegas;
  std::vector<double> amplitudes;
  double t_end = 20.0;
  double warmup_periods = 10.0;
  double smooth_bound = 1.5;
  int jobs = 1;

  void validate() const;
};

struct ScanRow {
  double omega = 0.0;
  double amplitude = 0.0;
  double energy = 0.0;
  double max_residual = 0.0;
  std::string status = "ok";
};

struct SmoothnessReport {
  double omega = 0.0;
  /// Largest adjacent ratio of E/A^2 (either direction) over A > 0.
  double max_normalized_ratio = 0.0;
  /// Largest raw adjacent ratio E[i+1]/E[i] over E[i] > 0.
  double max_raw_ratio = 0.0;
  bool monotone = true;
  bool smooth = true;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<SmoothnessReport> smoothness;
  double wall_seconds = 0.0;
};

SmoothnessReport assess_smoothness(double omega, const std::vector<double>& amplitudes,
                                   const std::vector<double>& energies, double bound);

ScanResult radial_scan(const ScanSpec& spec);

// ---- bit transmission ------------------------------------------------------------------------

struct PeakSettings {
  /// Peaks must exceed this multiple of the median of the smoothed series.
  double background_factor = 10.0;
  /// Minimum spacing between accepted peaks, as a fraction of the bit period.
  double min_separation = 0.5;
};

struct BitSignalSpec {
  RunConfig base{};
  std::vector<int> bits;
  double period = 150.0;
  double amp_factor = 3.0;
  double omega = 0.9;
  /// Simulated time; 0 selects (bits + 1) periods.
  double t_end = 0.0;
  PeakSettings peaks{};

  void validate() const;
};

struct PeakTable {
  std::vector<double> times;
  std::vector<double> values;
  double background = 0.0;
};

struct BitsResult {
  SimulationResult run;
  PeakTable peaks;
};

/// Moving average over a window of `window` samples centred on each point.
std::vector<double> smooth_series(const std::vector<double>& values, long window);

/// Local maxima of the one-period moving average of H, above factor x median and
/// separated by at least min_separation x period (the larger of two close maxima wins).
PeakTable find_peaks(const SiteSeries& series, double drive_period, double bit_period,
                     const PeakSettings& settings);

BitsResult transmit_bits(const BitSignalSpec& spec);

/// Runs body(i) for i in [0, count) on up to `jobs` threads; exceptions are rethrown.
void run_jobs(int jobs, std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace nlwave
