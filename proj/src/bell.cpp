#include "spinsim/bell.hpp"

#include <cmath>
#include <limits>

namespace spinsim {

namespace {

const char* atom_name(int idx) {
  static const char* names[8] = {"mu(E-F-G-)", "mu(E-F-G+)", "mu(E-F+G-)", "mu(E-F+G+)",
                                 "mu(E+F-G-)", "mu(E+F-G+)", "mu(E+F+G-)", "mu(E+F+G+)"};
  return names[idx];
}

}  // namespace

JointTable AtomMeasure::table() const {
  JointTable t;
  t.p_e = mass[4] + mass[5] + mass[6] + mass[7];
  t.p_f = mass[2] + mass[3] + mass[6] + mass[7];
  t.p_g = mass[1] + mass[3] + mass[5] + mass[7];
  t.j_ef = mass[6] + mass[7];
  t.j_eg = mass[5] + mass[7];
  t.j_fg = mass[3] + mass[7];
  return t;
}

FeasibilityResult feasibility(const JointTable& tb) {
  FeasibilityResult out;

  // Frechet bounds first; a violation is trivially infeasible.
  struct Bound {
    double lhs, rhs;
    const char* what;
  };
  const Bound frechet[] = {
      {0.0, tb.p_e, "0 <= p_e <= 1"},
      {0.0, tb.p_f, "0 <= p_f <= 1"},
      {0.0, tb.p_g, "0 <= p_g <= 1"},
      {tb.p_e - 1.0, 0.0, "0 <= p_e <= 1"},
      {tb.p_f - 1.0, 0.0, "0 <= p_f <= 1"},
      {tb.p_g - 1.0, 0.0, "0 <= p_g <= 1"},
      {0.0, tb.j_ef, "j_ef >= 0"},
      {0.0, tb.j_eg, "j_eg >= 0"},
      {0.0, tb.j_fg, "j_fg >= 0"},
      {tb.j_ef, std::min(tb.p_e, tb.p_f), "j_ef <= min(p_e, p_f)"},
      {tb.j_eg, std::min(tb.p_e, tb.p_g), "j_eg <= min(p_e, p_g)"},
      {tb.j_fg, std::min(tb.p_f, tb.p_g), "j_fg <= min(p_f, p_g)"},
      {tb.p_e + tb.p_f - 1.0, tb.j_ef, "j_ef >= p_e + p_f - 1"},
      {tb.p_e + tb.p_g - 1.0, tb.j_eg, "j_eg >= p_e + p_g - 1"},
      {tb.p_f + tb.p_g - 1.0, tb.j_fg, "j_fg >= p_f + p_g - 1"},
  };
  for (const Bound& b : frechet) {
    if (b.lhs > b.rhs) {
      out.feasible = false;
      out.certificate = std::string("Frechet bound violated: ") + b.what;
      out.slack = b.rhs - b.lhs;
      return out;
    }
  }

  // Every atom is affine in t = mu(E+F+G+); nonnegativity of the atoms with
  // coefficient +1 bounds t below, the others bound it above.
  struct Lin {
    int atom;      // index of the constrained atom
    double bound;  // t >= bound (lower) or t <= bound (upper)
  };
  const Lin lowers[] = {
      {7, 0.0},
      {4, tb.j_ef + tb.j_eg - tb.p_e},
      {2, tb.j_ef + tb.j_fg - tb.p_f},
      {1, tb.j_eg + tb.j_fg - tb.p_g},
  };
  const Lin uppers[] = {
      {6, tb.j_ef},
      {5, tb.j_eg},
      {3, tb.j_fg},
      {0, 1.0 - tb.p_e - tb.p_f - tb.p_g + tb.j_ef + tb.j_eg + tb.j_fg},
  };
  Lin lo = lowers[0], hi = uppers[0];
  for (const Lin& l : lowers)
    if (l.bound > lo.bound) lo = l;
  for (const Lin& u : uppers)
    if (u.bound < hi.bound) hi = u;

  if (lo.bound > hi.bound) {
    out.feasible = false;
    out.certificate = std::string(atom_name(lo.atom)) + " >= 0 forces t >= " +
                      std::to_string(lo.bound) + " while " + atom_name(hi.atom) +
                      " >= 0 forces t <= " + std::to_string(hi.bound);
    out.slack = hi.bound - lo.bound;
    return out;
  }

  double t = 0.5 * (lo.bound + hi.bound);
  AtomMeasure w;
  w.mass[7] = t;
  w.mass[6] = tb.j_ef - t;
  w.mass[5] = tb.j_eg - t;
  w.mass[3] = tb.j_fg - t;
  w.mass[4] = tb.p_e - tb.j_ef - tb.j_eg + t;
  w.mass[2] = tb.p_f - tb.j_ef - tb.j_fg + t;
  w.mass[1] = tb.p_g - tb.j_eg - tb.j_fg + t;
  w.mass[0] = 1.0 - tb.p_e - tb.p_f - tb.p_g + tb.j_ef + tb.j_eg + tb.j_fg - t;
  out.feasible = true;
  out.witness = w;
  out.slack = hi.bound - lo.bound;
  return out;
}

JointTable build_var4_table(double halfwidth, Angle theta_f, Angle theta_g, Angle theta_e) {
  if (!(halfwidth > 0.0) || halfwidth > pi)
    throw std::invalid_argument("build_var4_table: halfwidth must be in (0, pi]");
  double sinc = std::sin(halfwidth) / halfwidth;
  double pg = halfwidth / pi;
  JointTable t;
  t.p_e = 0.5;
  t.p_f = 0.5;
  t.p_g = pg;
  t.j_fg = 0.5 * (1.0 + std::cos(theta_f.signed_diff(theta_g)) * sinc) * pg;
  t.j_eg = 0.5 * (1.0 + std::cos(theta_e.signed_diff(theta_g)) * sinc) * pg;
  t.j_ef = 0.25;  // independent devices, cross joint = 1/2 * 1/2
  return t;
}

double pair_correlation(double p_i, double p_k, double j_ik) {
  return 1.0 - 2.0 * p_i - 2.0 * p_k + 4.0 * j_ik;
}

CorrelationEstimate correlation(std::span<const std::pair<Outcome, Outcome>> pairs) {
  CorrelationEstimate est;
  double sum = 0.0;
  for (const auto& [x, y] : pairs) {
    sum += static_cast<double>(sign(x) * sign(y));
    ++est.n_pairs;
  }
  if (est.n_pairs > 0) {
    est.e_hat = sum / static_cast<double>(est.n_pairs);
    est.defined = true;
  }
  return est;
}

double chsh(double e_ab, double e_abp, double e_apb, double e_apbp) {
  return e_ab - e_abp + e_apb + e_apbp;
}

namespace {

// Undetected iff the hidden angle lies within one of the two antipodal
// rejection arcs of the given analyzer (total circle measure eps).
bool detected(Angle lambda, Angle analyzer, double eps, double arc_offset) {
  if (eps <= 0.0) return true;
  double w = eps * pi / 2.0;  // half-width of each arc
  double d = std::abs(lambda.signed_diff(analyzer + arc_offset));
  return d >= w && d <= pi - w;
}

struct PairDraw {
  Outcome left, right;
  bool left_detected, right_detected;
};

PairDraw draw_pair(PairModel model, Angle x, Angle y, double eps, double arc_offset,
                   RngStream& rng) {
  PairDraw d;
  switch (model) {
    case PairModel::SequentialAerts: {
      Angle phi = rng.next_angle();
      Outcome o1 = spin_response(rng.next_double(), phi, x);
      ParticleState st = collapse(x, o1);
      Angle phi2 = std::get<PointAt>(st).at;
      Outcome o2 = spin_response(rng.next_double(), phi2, y);
      d = {o1, o2, detected(phi, x, eps, arc_offset), detected(phi2, y, eps, arc_offset)};
      break;
    }
    case PairModel::ProductMeasure: {
      Angle p1 = rng.next_angle(), p2 = rng.next_angle();
      Outcome o1 = spin_response(rng.next_double(), p1, x);
      Outcome o2 = spin_response(rng.next_double(), p2, y);
      d = {o1, o2, detected(p1, x, eps, arc_offset), detected(p2, y, eps, arc_offset)};
      break;
    }
    case PairModel::DeterministicSign: {
      Angle lambda = rng.next_angle();
      Outcome o1 = outcome_from_sign(std::cos(lambda.signed_diff(x)) >= 0.0 ? +1 : -1);
      Outcome o2 = outcome_from_sign(std::cos(lambda.signed_diff(y)) >= 0.0 ? +1 : -1);
      d = {o1, o2, detected(lambda, x, eps, arc_offset), detected(lambda, y, eps, arc_offset)};
      break;
    }
  }
  return d;
}

}  // namespace

ChshResult postselected_chsh(const ChshSetting& setting, PairModel model,
                             std::size_t n_per_setting, RngStream& rng) {
  if (setting.eps < 0.0 || setting.eps >= 1.0)
    throw std::invalid_argument("postselected_chsh: eps must be in [0, 1)");
  const std::pair<Angle, Angle> pairs[4] = {{setting.a, setting.b},
                                            {setting.a, setting.b_prime},
                                            {setting.a_prime, setting.b},
                                            {setting.a_prime, setting.b_prime}};
  ChshResult r;
  std::size_t total_accepted = 0;
  for (int k = 0; k < 4; ++k) {
    double sum = 0.0;
    CorrelationEstimate& est = r.correlations[k];
    for (std::size_t i = 0; i < n_per_setting; ++i) {
      PairDraw d =
          draw_pair(model, pairs[k].first, pairs[k].second, setting.eps, setting.arc_offset, rng);
      if (d.left_detected && d.right_detected) {
        sum += static_cast<double>(sign(d.left) * sign(d.right));
        ++est.n_pairs;
      } else {
        ++est.n_rejected;
      }
    }
    if (est.n_pairs > 0) {
      est.e_hat = sum / static_cast<double>(est.n_pairs);
      est.defined = true;
    }
    total_accepted += est.n_pairs;
  }
  r.detection_rate =
      static_cast<double>(total_accepted) / static_cast<double>(4 * n_per_setting);
  r.defined = r.correlations[0].defined && r.correlations[1].defined &&
              r.correlations[2].defined && r.correlations[3].defined;
  if (r.defined)
    r.s = chsh(r.correlations[0].e_hat, r.correlations[1].e_hat, r.correlations[2].e_hat,
               r.correlations[3].e_hat);
  return r;
}

double deterministic_sign_chsh(const ChshSetting& setting, std::size_t grid) {
  const std::pair<Angle, Angle> pairs[4] = {{setting.a, setting.b},
                                            {setting.a, setting.b_prime},
                                            {setting.a_prime, setting.b},
                                            {setting.a_prime, setting.b_prime}};
  double e[4];
  for (int k = 0; k < 4; ++k) {
    double num = 0.0;
    std::size_t den = 0;
    for (std::size_t i = 0; i < grid; ++i) {
      Angle lambda((static_cast<double>(i) + 0.5) * two_pi / static_cast<double>(grid));
      if (!detected(lambda, pairs[k].first, setting.eps, setting.arc_offset)) continue;
      if (!detected(lambda, pairs[k].second, setting.eps, setting.arc_offset)) continue;
      int s1 = std::cos(lambda.signed_diff(pairs[k].first)) >= 0.0 ? +1 : -1;
      int s2 = std::cos(lambda.signed_diff(pairs[k].second)) >= 0.0 ? +1 : -1;
      num += static_cast<double>(s1 * s2);
      ++den;
    }
    if (den == 0) return std::numeric_limits<double>::quiet_NaN();
    e[k] = num / static_cast<double>(den);
  }
  return chsh(e[0], e[1], e[2], e[3]);
}

}  // namespace spinsim
