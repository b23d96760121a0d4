#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "spinsim/core.hpp"
#include "spinsim/stats.hpp"

namespace spinsim {

/// Marginals and pairwise joints of three +/-1 observables E, F, G.
/// p_i = P(X_i = +1), j_ik = P(X_i = +1 and X_k = +1).
struct JointTable {
  double p_e = 0.5, p_f = 0.5, p_g = 0.5;
  double j_ef = 0.25, j_eg = 0.25, j_fg = 0.25;
};

/// A measure on the 8 atoms of (E, F, G). Index bits: 4 = E+, 2 = F+, 1 = G+.
struct AtomMeasure {
  std::array<double, 8> mass{};

  double atom(bool e_plus, bool f_plus, bool g_plus) const {
    return mass[(e_plus ? 4 : 0) | (f_plus ? 2 : 0) | (g_plus ? 1 : 0)];
  }

  JointTable table() const;
};

struct FeasibilityResult {
  bool feasible = false;
  std::optional<AtomMeasure> witness;  // when feasible
  std::string certificate;             // violated constraint, when infeasible
  double slack = 0.0;                  // negative when infeasible
};

/// Decides whether a nonnegative measure on the 8 atoms matches the given
/// marginals and joints. Exact linear reasoning: all atoms are affine in
/// t = mu(E+ F+ G+), so feasibility is an interval intersection.
FeasibilityResult feasibility(const JointTable& table);

/// The fourth-variation constraint table: E and F are measurements at
/// theta_e, theta_f (marginal 1/2), G is "the particle lies in the interval
/// of halfwidth x around theta_g" (marginal x/pi). Joints with G follow the
/// interval law; the E-F joint is 1/4 by cross-device independence.
JointTable build_var4_table(double halfwidth, Angle theta_f, Angle theta_g, Angle theta_e);

/// E[X_i * X_k] implied by marginals p_i, p_k and joint j_ik.
double pair_correlation(double p_i, double p_k, double j_ik);

struct CorrelationEstimate {
  double e_hat = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_rejected = 0;
  bool defined = false;  // false when no accepted pairs
};

/// Mean product of signs over a list of outcome pairs.
CorrelationEstimate correlation(std::span<const std::pair<Outcome, Outcome>> pairs);

/// S = E_ab - E_ab' + E_a'b + E_a'b'.
double chsh(double e_ab, double e_abp, double e_apb, double e_apbp);

/// Analyzer settings plus optional per-side rejection arcs. A side's outcome
/// is undetected when the hidden angle falls within one of two antipodal
/// arcs centered at analyzer + arc_offset (mod pi), of total circle measure
/// eps per side.
struct ChshSetting {
  Angle a, a_prime, b, b_prime;
  double eps = 0.0;  // in [0, 1)
  double arc_offset = pi / 2.0;
};

enum class PairModel {
  SequentialAerts,    // measure at a, collapse, measure at b: E = cos(a - b)
  ProductMeasure,     // independent fresh particle and device per side
  DeterministicSign,  // shared hidden angle, outcome = sign(cos(lambda - angle))
};

struct ChshResult {
  double s = 0.0;
  double detection_rate = 1.0;  // accepted coincidences / generated pairs
  std::array<CorrelationEstimate, 4> correlations{};  // ab, ab', a'b, a'b'
  bool defined = false;
};

/// CHSH experiment with postselection on coincident detections. With eps = 0
/// every pair is detected and this reduces to plain chsh estimation.
ChshResult postselected_chsh(const ChshSetting& setting, PairModel model,
                             std::size_t n_per_setting, RngStream& rng);

/// Deterministic (quadrature) value of the postselected CHSH S for the
/// DeterministicSign model, integrating the hidden angle over a grid.
/// Used to search arc placements for S > 2.
double deterministic_sign_chsh(const ChshSetting& setting, std::size_t grid = 20000);

}  // namespace spinsim
