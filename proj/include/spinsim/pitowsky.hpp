#pragma once

#include "spinsim/core.hpp"
#include "spinsim/stats.hpp"

namespace spinsim {

/// Generative two-coloring rules for a pole z and a test point w at angular
/// separation theta. All three share fair single-point marginals and
/// antipodal anticolor, yet give different conditional statistics —
/// the probability-space ambiguity under test.
enum class ColoringModel {
  ParallelLaw,      // P(w white | z white) = cos^2(theta/2)
  IndependentFair,  // independent fair colors (forced agreement at 0, anti at pi)
  HalfArc,          // a uniformly rotated half-white arc on the great circle
};

struct SpherePair {
  Outcome s_z;  // color at the pole z
  Outcome s_w;  // color at the test point w
};

/// Draw one sphere's colors at (z, w). theta must be in [0, pi].
SpherePair sample_pair(ColoringModel model, Angle theta, RngStream& rng);

/// Analytic conditional P(w white | z white):
/// cos^2(theta/2), 1/2 on (0, pi), or 1 - theta/pi respectively.
double law_conditional(ColoringModel model, Angle theta);

/// Expected limit of the conditioned running average of s_w:
/// cos(theta), 0, or 1 - 2*theta/pi.
double expected_limit(ColoringModel model, Angle theta);

struct FrequencyResult {
  std::size_t accepted = 0;  // spheres with s_z = +1
  std::size_t rejected = 0;
  EstimatorSummary average;  // of sign(s_w) over accepted spheres
  bool defined() const { return accepted > 0; }
};

/// The conditioned frequency experiment: draw n spheres, keep those with
/// s_z = +1, average s_w over the kept ones. A zero accepted count is
/// reported as undefined, not an error.
FrequencyResult frequency_experiment(ColoringModel model, Angle theta, std::size_t n_spheres,
                                     RngStream& rng);

}  // namespace spinsim
