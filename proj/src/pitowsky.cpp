#include "spinsim/pitowsky.hpp"

#include <cmath>

namespace spinsim {

namespace {

double check_theta(Angle theta) {
  double t = theta.radians();
  if (t > pi) throw std::invalid_argument("theta must be in [0, pi]");
  return t;
}

}  // namespace

SpherePair sample_pair(ColoringModel model, Angle theta, RngStream& rng) {
  double t = check_theta(theta);
  switch (model) {
    case ColoringModel::ParallelLaw: {
      int z = rng.next_sign();
      // Conditional on the white pole: white with prob cos^2(t/2); the
      // antipodal rule fixes the black-pole branch to sin^2(t/2).
      double c = std::cos(t / 2.0);
      double p_white = z > 0 ? c * c : 1.0 - c * c;
      int w = rng.next_double() < p_white ? +1 : -1;
      return {outcome_from_sign(z), outcome_from_sign(w)};
    }
    case ColoringModel::IndependentFair: {
      int z = rng.next_sign();
      int w;
      if (t == 0.0)
        w = z;
      else if (t == pi)
        w = -z;  // antipodes always anticolored
      else
        w = rng.next_sign();
      return {outcome_from_sign(z), outcome_from_sign(w)};
    }
    case ColoringModel::HalfArc: {
      // One half of the great circle is white; a point is white iff it lies
      // in [psi, psi + pi). z sits at angle 0, w at angle theta.
      double psi = rng.next_double() * two_pi;
      auto in_arc = [psi](double x) {
        double d = std::fmod(x - psi + two_pi, two_pi);
        return d < pi;
      };
      return {outcome_from_sign(in_arc(0.0) ? +1 : -1), outcome_from_sign(in_arc(t) ? +1 : -1)};
    }
  }
  throw std::logic_error("unreachable");
}

double law_conditional(ColoringModel model, Angle theta) {
  double t = check_theta(theta);
  switch (model) {
    case ColoringModel::ParallelLaw: {
      double c = std::cos(t / 2.0);
      return c * c;
    }
    case ColoringModel::IndependentFair:
      if (t == 0.0) return 1.0;
      if (t == pi) return 0.0;
      return 0.5;
    case ColoringModel::HalfArc:
      return 1.0 - t / pi;
  }
  throw std::logic_error("unreachable");
}

double expected_limit(ColoringModel model, Angle theta) {
  return 2.0 * law_conditional(model, theta) - 1.0;
}

FrequencyResult frequency_experiment(ColoringModel model, Angle theta, std::size_t n_spheres,
                                     RngStream& rng) {
  if (n_spheres < 1) throw std::invalid_argument("frequency_experiment: n_spheres must be >= 1");
  FrequencyResult r;
  for (std::size_t i = 0; i < n_spheres; ++i) {
    SpherePair p = sample_pair(model, theta, rng);
    if (p.s_z == Outcome::Plus) {
      ++r.accepted;
      r.average.add(static_cast<double>(sign(p.s_w)));
    } else {
      ++r.rejected;
    }
  }
  return r;
}

}  // namespace spinsim
