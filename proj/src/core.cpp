#include "spinsim/core.hpp"

#include <cmath>

namespace spinsim {

Outcome spin_response(double u, Angle phi, Angle alpha) {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("spin_response: u must be in [0, 1]");
  double s = std::sin(alpha.signed_diff(phi) / 2.0);
  return u > s * s ? Outcome::Plus : Outcome::Minus;
}

Outcome coulomb_outcome(Angle theta, double q1, double q2) {
  if (q1 < 0.0 || q2 < 0.0 || q1 + q2 <= 0.0)
    throw std::invalid_argument("coulomb_outcome: charges must be nonnegative with q1 + q2 > 0");
  double half = separation(theta, Angle(0.0)) / 2.0;
  double c = std::cos(half), s = std::sin(half);
  // Covers the singular endpoints: at theta=0 the q1 force diverges
  // (s=0, any q1>0 wins), at theta=pi the q2 force does.
  return q1 * c * c > q2 * s * s ? Outcome::Plus : Outcome::Minus;
}

ParticleState collapse(Angle alpha, Outcome outcome) {
  return outcome == Outcome::Plus ? PointAt{alpha} : PointAt{alpha.antipode()};
}

HiddenState sample_hidden(const ParticleState& state, RngStream& rng) {
  HiddenState hs;
  hs.u = rng.next_double();
  hs.phi = std::visit(
      [&rng](const auto& s) -> Angle {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, UniformOnCircle>) {
          return rng.next_angle();
        } else if constexpr (std::is_same_v<T, UniformOnInterval>) {
          return Angle(s.center.radians() + rng.uniform(-s.halfwidth, s.halfwidth));
        } else {
          return s.at;
        }
      },
      state);
  return hs;
}

}  // namespace spinsim
