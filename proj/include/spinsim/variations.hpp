#pragma once

#include <span>
#include <variant>
#include <vector>

#include "spinsim/core.hpp"
#include "spinsim/stats.hpp"

namespace spinsim {

// Measurement protocols. They differ in what is resampled between steps:
// fresh devices draw a new charge split per measurement, polarizing
// protocols collapse the particle after each step.

struct Baseline {};  // fresh device per step, collapse after each step

struct Var1SameDevice {};  // one device (one u) for the whole sequence, no collapse

struct Var2IndependentDevices {
  // Paper semantics (default): particle position re-drawn before each step,
  // which makes successive measurements exactly independent. The shared
  // position mode holds the initial position fixed instead; its Bayesian
  // conditional is 1/2 + cos(delta)/4, not 1/2.
  bool shared_position = false;
};

struct Var3KnownPoint {
  Angle alpha;  // known particle location, held fixed, no collapse
};

struct Var4KnownInterval {
  Angle center;
  double halfwidth;  // in (0, pi]
};

struct Var5FixedCharges {
  double q1 = 0.0;  // known charges, q1 > q2 > 0; force comparison + collapse
  double q2 = 0.0;
};

using Protocol = std::variant<Baseline, Var1SameDevice, Var2IndependentDevices, Var3KnownPoint,
                              Var4KnownInterval, Var5FixedCharges>;

struct SequenceResult {
  std::vector<Outcome> outcomes;  // one per device angle
  ParticleState final_state;
  std::vector<HiddenState> trace;  // per-step hidden draws, for replay
};

/// Run one measurement sequence at the given device angles.
SequenceResult run_sequence(const Protocol& protocol, std::span<const Angle> angles,
                            RngStream& rng);

// Closed-form probability laws, used as analytic oracles for the protocols.

/// First-measurement law for a particle at polar separation theta: cos^2(theta/2).
double law_p_plus(Angle theta);

/// Same-device, no-polarization conditional:
/// 1 - (2/pi) * sign(theta_g - theta_f) * sin((theta_g - theta_f)/2),
/// with the difference reduced to (-pi, pi]. Depends only on the separation.
double law_var1_conditional(Angle theta_f, Angle theta_g);

/// Independent devices, particle re-drawn between steps: constant 1/2.
double law_var2_conditional();

/// Independent devices but a shared fixed particle position: 1/2 + cos(delta)/4.
double law_var2_shared_conditional(Angle theta_f, Angle theta_g);

/// Known particle point: cos^2((theta_f - alpha)/2).
double law_var3(Angle theta_f, Angle alpha);

/// Known interval of halfwidth x around alpha:
/// (1 + cos(theta_f - alpha) * sin(x)/x) / 2. Rejects x outside (0, pi].
double law_var4(Angle theta_f, Angle alpha, double halfwidth);

/// Polarizing-model conditional P(+1 at beta | +1 at alpha) = cos^2((alpha - beta)/2).
double law_sequential_conditional(Angle alpha, Angle beta);

/// First-measurement +1 probability with known charges under the chord
/// metric: (2/pi) * arctan(sqrt(q1/q2)). Requires q2 > 0.
double var5_first_prob_oracle(double q1, double q2);

/// The literal printed formula (1/pi) * arctan(sqrt(q1/q2)/2), kept for
/// comparison; it disagrees with the chord-metric derivation above.
double var5_first_prob_paper(double q1, double q2);

struct Var5OrderStats {
  EstimatorSummary p_f;    // P(f=+1), devices at 0
  EstimatorSummary p_fgh;  // P(+1 at 0, then +1 at pi/2, then +1 at pi)
  EstimatorSummary p_fh;   // P(+1 at 0, then +1 at pi)
};

/// Order-dependence experiment with devices at 0, pi/2, pi. Requires
/// q1 > q2 > 0 so the middle step relays deterministically.
Var5OrderStats var5_order_experiment(double q1, double q2, std::size_t n_trials, RngStream& rng);

}  // namespace spinsim
