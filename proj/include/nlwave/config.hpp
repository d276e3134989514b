#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlwave/experiments.hpp"
#include "nlwave/radial.hpp"
#include "nlwave/solver3d.hpp"

namespace nlwave {

/// Parse or validation failure; carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const noexcept { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct SweepSection {
  double omega = 0.9;
  std::vector<double> amplitudes;
  double jump_threshold = 3.0;
};

struct ScanSection {
  std::vector<double> omegas{0.9};
  std::vector<double> amplitudes;
  double t_end = 20.0;
  double warmup_periods = 10.0;
  double smooth_bound = 1.5;
};

struct TransmitSection {
  double t_end = 0.0;
  double background_factor = 10.0;
  double min_separation = 0.5;
};

struct OutputSection {
  std::string dir = ".";
  long sample_every = 1;
  std::vector<double> snapshot_times;
};

/// Fully validated configuration document.
struct Config {
  MediumParams medium{};
  Grid3 grid{};
  TimeGrid time{};
  DrivingSignal driving{};
  /// Ramp length in driving periods (ramped-sine only).
  double ramp_periods = 10.0;
  DampingProfile damping{};
  RadialParams radial{};
  NewtonSettings newton{};
  std::array<int, 3> monitor{1, 1, 1};
  SweepSection sweep{};
  ScanSection scan{};
  TransmitSection transmit{};
  OutputSection output{};

  RunConfig run_config(int workers) const;
  SweepSpec sweep_spec(int workers) const;
  ScanSpec scan_spec(int workers) const;
  BitSignalSpec bit_spec(int workers) const;
};

Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Effective configuration as JSON text; parse_config of the result reproduces the config.
std::string config_to_json(const Config& config);

}  // namespace nlwave
