#pragma once

#include <stdexcept>
#include <variant>

#include "spinsim/angle.hpp"
#include "spinsim/rng.hpp"

namespace spinsim {

enum class Outcome : int { Plus = +1, Minus = -1 };

inline int sign(Outcome o) { return static_cast<int>(o); }

inline Outcome outcome_from_sign(int s) { return s > 0 ? Outcome::Plus : Outcome::Minus; }

/// One point of the hidden-variable space: the device's charge fraction
/// u = q1/Q in [0,1] and the particle polar angle phi. Total charge is
/// normalized to 1, so u carries the whole charge split.
struct HiddenState {
  double u = 0.0;
  Angle phi;
};

struct RandomSplit {};  // q1 drawn uniformly in [0, Q] per measurement

struct FixedSplit {
  double q1 = 0.0;
  double q2 = 0.0;
};

/// Measurement apparatus: pole angle of q1 plus the charge policy.
struct Device {
  Angle alpha;
  std::variant<RandomSplit, FixedSplit> policy = RandomSplit{};
};

struct UniformOnCircle {};

struct UniformOnInterval {
  UniformOnInterval(Angle c, double h) : center(c), halfwidth(h) {
    if (!(h > 0.0) || h > pi)
      throw std::invalid_argument("UniformOnInterval: halfwidth must be in (0, pi]");
  }
  Angle center;
  double halfwidth;  // in (0, pi]; halfwidth pi covers the full circle
};

struct PointAt {
  Angle at;
};

/// The particle's positional distribution.
using ParticleState = std::variant<UniformOnCircle, UniformOnInterval, PointAt>;

/// Spin observable of the device at pole alpha: +1 iff the charge fraction
/// exceeds sin^2((alpha - phi)/2); ties go to -1.
Outcome spin_response(double u, Angle phi, Angle alpha);

/// Which charge wins the force comparison at polar separation theta.
/// Chord distance on the unit circle, d(theta) = 2 sin(theta/2), so
/// +1 iff q1*cos^2(theta/2) > q2*sin^2(theta/2). The diverging force decides
/// the endpoints: +1 at theta=0 (q1 > 0), -1 at theta=pi (q2 > 0).
Outcome coulomb_outcome(Angle theta, double q1, double q2);

/// Post-measurement state: the particle falls onto the winning charge.
ParticleState collapse(Angle alpha, Outcome outcome);

/// Draw hidden variables: u uniform on [0,1], phi from the particle state.
HiddenState sample_hidden(const ParticleState& state, RngStream& rng);

}  // namespace spinsim
