#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nlwave {

enum class PotentialKind { SineGordon, KleinGordon, LandauGinzburg, Zero };

/// On-site potential V(u).
///   SineGordon      1 - cos u
///   KleinGordon     u^2/2! - u^4/4!
///   LandauGinzburg  lambda u^4   (lambda > 0)
///   Zero            0
struct Potential {
  PotentialKind kind = PotentialKind::SineGordon;
  double lambda = 0.0;

  void validate() const;
};

/// Coefficients of u_tt - c^2 lap u + m2 u + V'(u) - J = beta lap u_t - gamma u_t.
struct MediumParams {
  double beta = 0.0;
  double gamma = 0.0;
  double mass_sq = 0.0;
  double josephson = 0.0;
  double coupling = 1.0;
  Potential potential{};

  void validate() const;
};

/// Cubic grid with n interior nodes per axis plus one boundary layer on each
/// side, so every time level stores (n+2)^3 values.
struct Grid3 {
  int n = 1;
  double dx = 1.0;
  double dy = 1.0;
  double dz = 1.0;

  void validate() const;
  std::size_t storage() const {
    const auto s = static_cast<std::size_t>(n + 2);
    return s * s * s;
  }
  std::size_t interior() const {
    const auto s = static_cast<std::size_t>(n);
    return s * s * s;
  }
  double cell_volume() const { return dx * dy * dz; }
  bool unit_steps() const { return dx == 1.0 && dy == 1.0 && dz == 1.0; }
};

struct TimeGrid {
  double dt = 0.05;
  long steps = 1;

  void validate() const;
  double t_end() const { return static_cast<double>(steps) * dt; }
};

enum class SignalKind { RampedSine, BitSequence };

/// Boundary forcing phi(t).
struct DrivingSignal {
  SignalKind kind = SignalKind::RampedSine;
  double amplitude = 0.0;
  double frequency = 0.9;
  double ramp_duration = 0.0;
  /// The clock may start at -warmup; the ramp then runs over [-warmup, ramp_duration - warmup].
  double warmup = 0.0;
  std::vector<int> bits;
  double period = 0.0;
  double amp_factor = 1.0;

  static DrivingSignal ramped_sine(double amplitude, double frequency, double ramp_duration,
                                   double warmup = 0.0);
  /// Default ramp: ten driving periods.
  static DrivingSignal ramped_sine_default(double amplitude, double frequency);
  static DrivingSignal bit_sequence(std::vector<int> bits, double period, double amp_factor,
                                    double frequency);
  static DrivingSignal silent() { return ramped_sine(0.0, 1.0, 0.0); }

  void validate() const;
  double driving_period() const;
};

enum class DampingKind { Uniform, LatticeAbsorbing, RadialAbsorbing };

struct DampingProfile {
  DampingKind kind = DampingKind::Uniform;
  int n0 = 50;
  double center = 5.5;
  double width_factor = 8.0;
  double onset = 5.0;
  double outer = 6.0;

  static DampingProfile uniform() { return {}; }
  static DampingProfile lattice_absorbing(int n0);
  static DampingProfile radial_absorbing();

  void validate() const;
};

double potential_value(const Potential& v, double u);
double potential_deriv(const Potential& v, double u);
double potential_second_deriv(const Potential& v, double u);

/// Divided difference (V(a) - V(b)) / (a - b), evaluated in a cancellation-free
/// closed form; falls back to V'((a+b)/2) when |a-b| <= tol * max(1,|a|,|b|).
double potential_quotient(const Potential& v, double a, double b, double tol = 1e-12);

/// Partial derivative of potential_quotient with respect to its first argument.
double potential_quotient_da(const Potential& v, double a, double b, double tol = 1e-12);

/// omega^2 = m2 + 1 + 4 (sin^2(xi/2) + sin^2(zeta/2) + sin^2(eta/2)).
double dispersion_omega_sq(double xi, double zeta, double eta, double mass_sq);

/// True when omega lies strictly below the lower edge sqrt(m2 + 1) of the linear spectrum.
bool in_band_gap(double omega, double mass_sq);

/// Single-bit envelope C b (exp(-Omega t / 2.5) - exp(-Omega t / 0.45)).
double bit_pulse_amplitude(double t, int bit, double amp_factor, double frequency);

/// Envelope A(t) of the signal (ramped amplitude or bit-sequence envelope).
double driving_envelope(const DrivingSignal& s, double t);

double eval_driving(const DrivingSignal& s, double t);

/// Site-local gamma on the lattice. Sites are interior indices 1..n.
double eval_damping_site(const DampingProfile& p, double gamma, int m, int n, int q, int grid_n);

/// Radial gamma(r).
double eval_damping_radius(const DampingProfile& p, double gamma, double r);

std::string to_string(PotentialKind k);
std::string to_string(SignalKind k);
std::string to_string(DampingKind k);

}  // namespace nlwave
