#include "spinsim/variations.hpp"

#include <cmath>

namespace spinsim {

namespace {

SequenceResult run_baseline(std::span<const Angle> angles, RngStream& rng) {
  SequenceResult r;
  ParticleState state = UniformOnCircle{};
  for (Angle a : angles) {
    HiddenState hs = sample_hidden(state, rng);
    Outcome o = spin_response(hs.u, hs.phi, a);
    state = collapse(a, o);
    r.outcomes.push_back(o);
    r.trace.push_back(hs);
  }
  r.final_state = state;
  return r;
}

SequenceResult run_var1(std::span<const Angle> angles, RngStream& rng) {
  SequenceResult r;
  // One device and one particle position for the whole sequence.
  HiddenState hs = sample_hidden(UniformOnCircle{}, rng);
  for (Angle a : angles) {
    r.outcomes.push_back(spin_response(hs.u, hs.phi, a));
    r.trace.push_back(hs);
  }
  r.final_state = PointAt{hs.phi};
  return r;
}

SequenceResult run_var2(const Var2IndependentDevices& v, std::span<const Angle> angles,
                        RngStream& rng) {
  SequenceResult r;
  Angle phi = rng.next_angle();
  for (Angle a : angles) {
    if (!v.shared_position) phi = rng.next_angle();
    double u = rng.next_double();
    r.outcomes.push_back(spin_response(u, phi, a));
    r.trace.push_back(HiddenState{u, phi});
  }
  r.final_state = v.shared_position ? ParticleState{PointAt{phi}} : ParticleState{UniformOnCircle{}};
  return r;
}

SequenceResult run_fixed_particle(const ParticleState& init, std::span<const Angle> angles,
                                  RngStream& rng) {
  SequenceResult r;
  HiddenState first = sample_hidden(init, rng);
  Angle phi = first.phi;  // held fixed, no collapse
  r.outcomes.push_back(spin_response(first.u, phi, angles[0]));
  r.trace.push_back(first);
  for (std::size_t i = 1; i < angles.size(); ++i) {
    double u = rng.next_double();
    r.outcomes.push_back(spin_response(u, phi, angles[i]));
    r.trace.push_back(HiddenState{u, phi});
  }
  r.final_state = PointAt{phi};
  return r;
}

SequenceResult run_var5(const Var5FixedCharges& v, std::span<const Angle> angles, RngStream& rng) {
  if (!(v.q1 > v.q2 && v.q2 > 0.0))
    throw std::invalid_argument("Var5 requires q1 > q2 > 0");
  SequenceResult r;
  double u = v.q1 / (v.q1 + v.q2);
  ParticleState state = UniformOnCircle{};
  for (Angle a : angles) {
    HiddenState hs = sample_hidden(state, rng);
    hs.u = u;  // the charge split is known, not hidden
    Outcome o = coulomb_outcome(Angle(separation(a, hs.phi)), v.q1, v.q2);
    state = collapse(a, o);
    r.outcomes.push_back(o);
    r.trace.push_back(hs);
  }
  r.final_state = state;
  return r;
}

}  // namespace

SequenceResult run_sequence(const Protocol& protocol, std::span<const Angle> angles,
                            RngStream& rng) {
  if (angles.empty()) throw std::invalid_argument("run_sequence: empty angle list");
  return std::visit(
      [&](const auto& p) -> SequenceResult {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Baseline>) {
          return run_baseline(angles, rng);
        } else if constexpr (std::is_same_v<T, Var1SameDevice>) {
          return run_var1(angles, rng);
        } else if constexpr (std::is_same_v<T, Var2IndependentDevices>) {
          return run_var2(p, angles, rng);
        } else if constexpr (std::is_same_v<T, Var3KnownPoint>) {
          return run_fixed_particle(PointAt{p.alpha}, angles, rng);
        } else if constexpr (std::is_same_v<T, Var4KnownInterval>) {
          return run_fixed_particle(UniformOnInterval(p.center, p.halfwidth), angles, rng);
        } else {
          return run_var5(p, angles, rng);
        }
      },
      protocol);
}

double law_p_plus(Angle theta) {
  double c = std::cos(separation(theta, Angle(0.0)) / 2.0);
  return c * c;
}

double law_var1_conditional(Angle theta_f, Angle theta_g) {
  double d = theta_g.signed_diff(theta_f);
  double sgn = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 0.0);
  return 1.0 - (2.0 / pi) * sgn * std::sin(d / 2.0);
}

double law_var2_conditional() { return 0.5; }

double law_var2_shared_conditional(Angle theta_f, Angle theta_g) {
  return 0.5 + 0.25 * std::cos(theta_f.signed_diff(theta_g));
}

double law_var3(Angle theta_f, Angle alpha) {
  double c = std::cos(theta_f.signed_diff(alpha) / 2.0);
  return c * c;
}

double law_var4(Angle theta_f, Angle alpha, double halfwidth) {
  if (!(halfwidth > 0.0) || halfwidth > pi)
    throw std::invalid_argument("law_var4: halfwidth must be in (0, pi]");
  double sinc = std::sin(halfwidth) / halfwidth;
  return 0.5 * (1.0 + std::cos(theta_f.signed_diff(alpha)) * sinc);
}

double law_sequential_conditional(Angle alpha, Angle beta) {
  double c = std::cos(alpha.signed_diff(beta) / 2.0);
  return c * c;
}

double var5_first_prob_oracle(double q1, double q2) {
  if (!(q2 > 0.0)) throw std::invalid_argument("var5_first_prob_oracle: q2 must be positive");
  if (q1 < 0.0) throw std::invalid_argument("var5_first_prob_oracle: q1 must be nonnegative");
  return (2.0 / pi) * std::atan(std::sqrt(q1 / q2));
}

double var5_first_prob_paper(double q1, double q2) {
  if (!(q2 > 0.0)) throw std::invalid_argument("var5_first_prob_paper: q2 must be positive");
  if (q1 < 0.0) throw std::invalid_argument("var5_first_prob_paper: q1 must be nonnegative");
  return (1.0 / pi) * std::atan(0.5 * std::sqrt(q1 / q2));
}

Var5OrderStats var5_order_experiment(double q1, double q2, std::size_t n_trials, RngStream& rng) {
  if (!(q1 > q2 && q2 > 0.0))
    throw std::invalid_argument("var5_order_experiment requires q1 > q2 > 0");
  const Angle fgh[] = {Angle(0.0), Angle(pi / 2.0), Angle(pi)};
  const Angle fh[] = {Angle(0.0), Angle(pi)};
  Protocol p = Var5FixedCharges{q1, q2};
  Var5OrderStats stats;
  for (std::size_t i = 0; i < n_trials; ++i) {
    SequenceResult r = run_sequence(p, fgh, rng);
    stats.p_f.add(r.outcomes[0] == Outcome::Plus ? 1.0 : 0.0);
    bool all_plus = r.outcomes[0] == Outcome::Plus && r.outcomes[1] == Outcome::Plus &&
                    r.outcomes[2] == Outcome::Plus;
    stats.p_fgh.add(all_plus ? 1.0 : 0.0);
  }
  for (std::size_t i = 0; i < n_trials; ++i) {
    SequenceResult r = run_sequence(p, fh, rng);
    stats.p_fh.add(r.outcomes[0] == Outcome::Plus && r.outcomes[1] == Outcome::Plus ? 1.0 : 0.0);
  }
  return stats;
}

}  // namespace spinsim
