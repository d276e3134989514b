#include "nlwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nlwave/errors.hpp"

namespace nlwave {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ContractError(what);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

void Potential::validate() const {
  if (kind == PotentialKind::LandauGinzburg) {
    require(finite(lambda) && lambda > 0.0, "potential.lambda must be > 0 for Landau-Ginzburg");
  }
}

void MediumParams::validate() const {
  require(finite(beta) && beta >= 0.0, "medium.beta must be >= 0");
  require(finite(gamma) && gamma >= 0.0, "medium.gamma must be >= 0");
  require(finite(mass_sq), "medium.mass_sq must be finite");
  require(finite(josephson) && josephson >= 0.0, "medium.josephson must be >= 0");
  require(finite(coupling) && coupling > 0.0, "medium.coupling must be > 0");
  potential.validate();
}

void Grid3::validate() const {
  require(n >= 1, "grid.n must be >= 1");
  require(finite(dx) && dx > 0.0, "grid.dx must be > 0");
  require(finite(dy) && dy > 0.0, "grid.dy must be > 0");
  require(finite(dz) && dz > 0.0, "grid.dz must be > 0");
}

void TimeGrid::validate() const {
  require(finite(dt) && dt > 0.0, "time.dt must be > 0");
  require(steps >= 1, "time.steps must be >= 1");
}

DrivingSignal DrivingSignal::ramped_sine(double amplitude, double frequency, double ramp_duration,
                                         double warmup) {
  DrivingSignal s;
  s.kind = SignalKind::RampedSine;
  s.amplitude = amplitude;
  s.frequency = frequency;
  s.ramp_duration = ramp_duration;
  s.warmup = warmup;
  return s;
}

DrivingSignal DrivingSignal::ramped_sine_default(double amplitude, double frequency) {
  return ramped_sine(amplitude, frequency, 20.0 * std::numbers::pi / frequency);
}

DrivingSignal DrivingSignal::bit_sequence(std::vector<int> bits, double period, double amp_factor,
                                          double frequency) {
  DrivingSignal s;
  s.kind = SignalKind::BitSequence;
  s.bits = std::move(bits);
  s.period = period;
  s.amp_factor = amp_factor;
  s.frequency = frequency;
  return s;
}

double DrivingSignal::driving_period() const { return 2.0 * std::numbers::pi / frequency; }

void DrivingSignal::validate() const {
  require(finite(frequency) && frequency > 0.0, "driving.frequency must be > 0");
  require(finite(warmup) && warmup >= 0.0, "driving.warmup must be >= 0");
  if (kind == SignalKind::RampedSine) {
    require(finite(amplitude) && amplitude >= 0.0, "driving.amplitude must be >= 0");
    require(finite(ramp_duration) && ramp_duration >= 0.0, "driving.ramp_duration must be >= 0");
    require(bits.empty(), "driving.bits only allowed for bit-sequence signals");
    return;
  }
  require(!bits.empty(), "driving.bits must be nonempty");
  for (int b : bits) require(b == 0 || b == 1, "driving.bits entries must be 0 or 1");
  require(finite(period) && period > 0.0, "driving.period must be > 0");
  require(finite(amp_factor) && amp_factor > 0.0, "driving.amp_factor must be > 0");
  // P = 150 with Omega = 0.9 is not a whole number of cycles; only a full cycle is required.
  require(period >= driving_period() * (1.0 - 1e-9),
          "driving.period must be at least one driving period 2*pi/frequency");
}

DampingProfile DampingProfile::lattice_absorbing(int n0) {
  DampingProfile p;
  p.kind = DampingKind::LatticeAbsorbing;
  p.n0 = n0;
  return p;
}

DampingProfile DampingProfile::radial_absorbing() {
  DampingProfile p;
  p.kind = DampingKind::RadialAbsorbing;
  return p;
}

void DampingProfile::validate() const {
  if (kind == DampingKind::LatticeAbsorbing) require(n0 >= 1, "damping.n0 must be >= 1");
  if (kind == DampingKind::RadialAbsorbing) {
    require(finite(center) && finite(width_factor) && finite(onset) && finite(outer),
            "damping radial parameters must be finite");
    require(width_factor > 0.0, "damping.width_factor must be > 0");
    require(onset <= outer, "damping.onset must not exceed damping.outer");
  }
}

double potential_value(const Potential& v, double u) {
  switch (v.kind) {
    case PotentialKind::SineGordon: {
      // 1 - cos u without cancellation near u = 0.
      const double s = std::sin(0.5 * u);
      return 2.0 * s * s;
    }
    case PotentialKind::KleinGordon: {
      const double u2 = u * u;
      return 0.5 * u2 - u2 * u2 / 24.0;
    }
    case PotentialKind::LandauGinzburg: {
      const double u2 = u * u;
      return v.lambda * u2 * u2;
    }
    case PotentialKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double potential_deriv(const Potential& v, double u) {
  switch (v.kind) {
    case PotentialKind::SineGordon:
      return std::sin(u);
    case PotentialKind::KleinGordon:
      return u - u * u * u / 6.0;
    case PotentialKind::LandauGinzburg:
      return 4.0 * v.lambda * u * u * u;
    case PotentialKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double potential_second_deriv(const Potential& v, double u) {
  switch (v.kind) {
    case PotentialKind::SineGordon:
      return std::cos(u);
    case PotentialKind::KleinGordon:
      return 1.0 - 0.5 * u * u;
    case PotentialKind::LandauGinzburg:
      return 12.0 * v.lambda * u * u;
    case PotentialKind::Zero:
      return 0.0;
  }
  return 0.0;
}

namespace {

bool quotient_degenerate(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace

double potential_quotient(const Potential& v, double a, double b, double tol) {
  if (quotient_degenerate(a, b, tol)) return potential_deriv(v, 0.5 * (a + b));
  switch (v.kind) {
    case PotentialKind::SineGordon: {
      // cos b - cos a = 2 sin((a+b)/2) sin((a-b)/2)
      const double h = 0.5 * (a - b);
      return std::sin(0.5 * (a + b)) * (std::sin(h) / h);
    }
    case PotentialKind::KleinGordon: {
      const double s = a + b;
      return 0.5 * s - s * (a * a + b * b) / 24.0;
    }
    case PotentialKind::LandauGinzburg:
      return v.lambda * (a + b) * (a * a + b * b);
    case PotentialKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double potential_quotient_da(const Potential& v, double a, double b, double tol) {
  if (quotient_degenerate(a, b, tol)) return 0.5 * potential_second_deriv(v, 0.5 * (a + b));
  switch (v.kind) {
    case PotentialKind::SineGordon: {
      const double s = 0.5 * (a + b);
      const double h = 0.5 * (a - b);
      const double sinc = std::sin(h) / h;
      // d/dh (sin h / h), series below |h| = 1e-4
      const double dsinc = std::abs(h) < 1e-4 ? -h / 3.0 : (h * std::cos(h) - std::sin(h)) / (h * h);
      return 0.5 * std::cos(s) * sinc + 0.5 * std::sin(s) * dsinc;
    }
    case PotentialKind::KleinGordon:
      return 0.5 - ((a * a + b * b) + 2.0 * a * (a + b)) / 24.0;
    case PotentialKind::LandauGinzburg:
      return v.lambda * ((a * a + b * b) + 2.0 * a * (a + b));
    case PotentialKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double dispersion_omega_sq(double xi, double zeta, double eta, double mass_sq) {
  const double sx = std::sin(0.5 * xi);
  const double sy = std::sin(0.5 * zeta);
  const double sz = std::sin(0.5 * eta);
  return mass_sq + 1.0 + 4.0 * (sx * sx + sy * sy + sz * sz);
}

bool in_band_gap(double omega, double mass_sq) {
  const double edge_sq = dispersion_omega_sq(0.0, 0.0, 0.0, mass_sq);
  return edge_sq > 0.0 && omega < std::sqrt(edge_sq);
}

double bit_pulse_amplitude(double t, int bit, double amp_factor, double frequency) {
  if (bit == 0) return 0.0;
  return amp_factor * (std::exp(-frequency * t / 2.5) - std::exp(-frequency * t / 0.45));
}

double driving_envelope(const DrivingSignal& s, double t) {
  if (s.kind == SignalKind::RampedSine) {
    if (s.ramp_duration <= 0.0) return s.amplitude;
    const double ratio = std::min(1.0, std::max(0.0, t + s.warmup) / s.ramp_duration);
    return ratio * s.amplitude;
  }
  if (t < 0.0) return 0.0;
  // Sum over the closed windows [(i-1)P, iP]; at most two overlap (at a shared endpoint).
  const auto count = static_cast<long>(s.bits.size());
  const auto slot = static_cast<long>(std::floor(t / s.period));
  double total = 0.0;
  for (long i = std::max(0L, slot - 1); i <= std::min(slot, count - 1); ++i) {
    const double start = static_cast<double>(i) * s.period;
    if (t < start || t > start + s.period) continue;
    total += bit_pulse_amplitude(t - start, s.bits[static_cast<std::size_t>(i)], s.amp_factor,
                                 s.frequency);
  }
  return total;
}

double eval_driving(const DrivingSignal& s, double t) {
  return driving_envelope(s, t) * std::sin(s.frequency * t);
}

double eval_damping_site(const DampingProfile& p, double gamma, int m, int n, int q, int grid_n) {
  if (m < 1 || n < 1 || q < 1 || m > grid_n || n > grid_n || q > grid_n) {
    throw RangeError("damping site outside interior 1..N");
  }
  if (p.kind != DampingKind::LatticeAbsorbing) return gamma;
  const auto layer = [&](int idx) {
    return std::tanh((2.0 * idx - 2.0 * grid_n + p.n0) / 6.0);
  };
  return gamma + (3.0 + layer(m) + layer(n) + layer(q)) / 6.0;
}

double eval_damping_radius(const DampingProfile& p, double gamma, double r) {
  if (!std::isfinite(r) || r < 0.0) throw RangeError("damping radius must be finite and >= 0");
  if (p.kind != DampingKind::RadialAbsorbing) return gamma;
  if (r < p.onset) return gamma;
  return gamma + 0.5 * (1.0 + std::tanh(p.width_factor * (r - p.center)));
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::SineGordon: return "sine-gordon";
    case PotentialKind::KleinGordon: return "klein-gordon";
    case PotentialKind::LandauGinzburg: return "landau-ginzburg";
    case PotentialKind::Zero: return "zero";
  }
  return "?";
}

std::string to_string(SignalKind k) {
  return k == SignalKind::RampedSine ? "ramped-sine" : "bit-sequence";
}

std::string to_string(DampingKind k) {
  switch (k) {
    case DampingKind::Uniform: return "uniform";
    case DampingKind::LatticeAbsorbing: return "lattice-absorbing";
    case DampingKind::RadialAbsorbing: return "radial-absorbing";
  }
  return "?";
}

}  // namespace nlwave
