#pragma once

#include <random>

#include "nlwave/solver3d.hpp"
#include "oracles.hpp"

namespace testing_support {

inline oracle::Medium to_oracle(const nlwave::MediumParams& p) {
  oracle::Medium md;
  md.beta = p.beta;
  md.gamma = p.gamma;
  md.m2 = p.mass_sq;
  md.J = p.josephson;
  md.c = p.coupling;
  md.kind = p.potential.kind;
  md.lambda = p.potential.lambda;
  return md;
}

inline oracle::Steps to_oracle(const nlwave::Grid3& g, double dt) {
  return oracle::Steps{g.dx, g.dy, g.dz, dt};
}

inline nlwave::MediumParams medium(nlwave::PotentialKind k, double beta = 0.0, double gamma = 0.0,
                                   double m2 = 0.0, double J = 0.0, double c = 1.0) {
  nlwave::MediumParams p;
  p.potential.kind = k;
  p.beta = beta;
  p.gamma = gamma;
  p.mass_sq = m2;
  p.josephson = J;
  p.coupling = c;
  return p;
}

/// Random level with boundaries set the way the solver sets them.
inline nlwave::FieldLevel random_state_level(const nlwave::Problem3D& pr, long k,
                                             std::mt19937_64& rng, double amp = 0.5) {
  nlwave::FieldLevel f = oracle::random_level(pr.n(), rng, amp);
  nlwave::apply_boundaries(pr, f, k);
  return f;
}

inline double max_diff(const nlwave::FieldLevel& a, const nlwave::FieldLevel& b) {
  double d = 0.0;
  const auto x = a.values();
  const auto y = b.values();
  for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace testing_support
