// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failures. Every Monte Carlo check uses 100000 trials and a 4-standard-error
// band; deterministic checks are exact.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "spinsim/bell.hpp"
#include "spinsim/pitowsky.hpp"
#include "spinsim/report.hpp"
#include "spinsim/variations.hpp"

using namespace spinsim;

namespace {

constexpr std::size_t kTrials = 100000;
int failures = 0;

void report(int criterion, const std::string& what, bool ok, const std::string& detail) {
  std::printf("%s criterion-%02d %s%s%s\n", ok ? "PASS" : "FAIL", criterion, what.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  if (!ok) ++failures;
}

EstimatorSummary conditional_mc(const Protocol& p, Angle first, Angle second, RngStream& rng,
                                std::size_t n = kTrials) {
  const Angle angles[] = {first, second};
  EstimatorSummary s;
  for (std::size_t i = 0; i < n; ++i) {
    SequenceResult r = run_sequence(p, angles, rng);
    if (r.outcomes[0] == Outcome::Plus) s.add(r.outcomes[1] == Outcome::Plus ? 1.0 : 0.0);
  }
  return s;
}

EstimatorSummary single_mc(const Protocol& p, Angle at, RngStream& rng, std::size_t n = kTrials) {
  const Angle angles[] = {at};
  EstimatorSummary s;
  for (std::size_t i = 0; i < n; ++i) {
    SequenceResult r = run_sequence(p, angles, rng);
    s.add(r.outcomes[0] == Outcome::Plus ? 1.0 : 0.0);
  }
  return s;
}

void criterion_1_first_law() {
  const double grid[] = {0.0, pi / 6, pi / 4, pi / 3, pi / 2, 2 * pi / 3, pi};
  bool ok = true;
  std::string detail;
  std::uint64_t idx = 0;
  for (double th : grid) {
    RngStream rng(1, idx++);
    EstimatorSummary s = single_mc(Var3KnownPoint{Angle(0.0)}, Angle(th), rng);
    double c = std::cos(th / 2.0), ref = c * c;
    bool point_ok;
    if (th == 0.0)
      point_ok = s.mean() == 1.0;  // exact at the aligned endpoint
    else if (th == pi)
      point_ok = s.mean() == 0.0;  // exact at the antipodal endpoint
    else
      point_ok = within_sigma(s, ref);
    if (!point_ok) {
      ok = false;
      detail = "theta=" + std::to_string(th) + " mean=" + std::to_string(s.mean());
    }
  }
  report(1, "first-measurement frequency matches cos^2(theta/2) on 7 angles", ok, detail);
}

void criterion_2_sequential() {
  bool ok = true;
  std::string detail;
  for (int k = 0; k <= 7; ++k) {
    double beta = k * pi / 7.0;
    RngStream rng(2, static_cast<std::uint64_t>(k));
    EstimatorSummary s = conditional_mc(Baseline{}, Angle(0.0), Angle(beta), rng);
    double c = std::cos(beta / 2.0), ref = c * c;
    bool point_ok = s.std_error() == 0.0 ? std::abs(s.mean() - ref) <= 1e-12
                                         : within_sigma(s, ref);
    if (!point_ok) {
      ok = false;
      detail = "beta=" + std::to_string(beta);
    }
  }
  // exact repeatability / anti-correlation over 10^4 trials
  RngStream rng(2, 100);
  for (int i = 0; i < 10000 && ok; ++i) {
    const Angle rep[] = {Angle(0.9), Angle(0.9)};
    const Angle anti[] = {Angle(0.9), Angle(0.9 + pi)};
    SequenceResult a = run_sequence(Baseline{}, rep, rng);
    SequenceResult b = run_sequence(Baseline{}, anti, rng);
    if (a.outcomes[0] != a.outcomes[1] || sign(b.outcomes[0]) * sign(b.outcomes[1]) != -1) {
      ok = false;
      detail = "repeatability/anti-correlation violated";
    }
  }
  report(2, "sequential conditional matches cos^2((alpha-beta)/2); repeats exact", ok, detail);
}

void criterion_3_marginal() {
  RngStream rng(3, 0);
  EstimatorSummary s = single_mc(Baseline{}, Angle(1.234), rng);
  report(3, "first-measurement marginal is 1/2", within_sigma(s, 0.5),
         "mean=" + std::to_string(s.mean()));
}

void criterion_4_variation1() {
  const double grid[] = {pi / 6, pi / 3, pi / 2, 2 * pi / 3, pi};
  bool ok = true;
  std::string detail;
  std::uint64_t idx = 0;
  for (double d : grid) {
    RngStream rng(4, idx++);
    EstimatorSummary s = conditional_mc(Var1SameDevice{}, Angle(0.0), Angle(d), rng);
    double ref = law_var1_conditional(Angle(d), Angle(0.0));
    if (!within_sigma(s, ref)) {
      ok = false;
      detail = "delta=" + std::to_string(d);
    }
  }
  // the quoted landmark: delta = pi gives 1 - 2/pi
  if (std::abs(law_var1_conditional(Angle(pi), Angle(0.0)) - (1.0 - 2.0 / pi)) > 1e-12) {
    ok = false;
    detail = "closed form at delta=pi";
  }
  report(4, "same-device conditional matches 1 - (2/pi) sin(delta/2)", ok, detail);
}

void criterion_5_variation2() {
  RngStream rng(5, 0);
  EstimatorSummary paper = conditional_mc(Var2IndependentDevices{false}, Angle(0.0),
                                          Angle(pi / 3), rng);
  bool ok = within_sigma(paper, 0.5);
  RngStream rng2(5, 1);
  EstimatorSummary shared = conditional_mc(Var2IndependentDevices{true}, Angle(0.0),
                                           Angle(pi / 3), rng2);
  // informational deviation report, not a pass/fail input
  std::printf("INFO criterion-05 shared-position mode at delta=pi/3: mean=%.5f "
              "(expected 1/2 + cos(delta)/4 = %.5f)\n",
              shared.mean(), law_var2_shared_conditional(Angle(pi / 3), Angle(0.0)));
  report(5, "independent-devices conditional is 1/2", ok,
         "mean=" + std::to_string(paper.mean()));
}

void criterion_6_variation4() {
  const double xs[] = {pi / 4, pi / 2, 3 * pi / 4, pi};
  const double deltas[] = {0.0, pi / 3, pi / 2, 2 * pi / 3};
  bool ok = true;
  std::string detail;
  std::uint64_t idx = 0;
  for (double x : xs) {
    for (double d : deltas) {
      RngStream rng(6, idx++);
      EstimatorSummary s = single_mc(Var4KnownInterval{Angle(0.0), x}, Angle(d), rng);
      if (!within_sigma(s, law_var4(Angle(d), Angle(0.0), x))) {
        ok = false;
        detail = "x=" + std::to_string(x) + " delta=" + std::to_string(d);
      }
    }
  }
  if (std::abs(law_var4(Angle(0.7), Angle(0.0), pi) - 0.5) > 1e-12) {
    ok = false;
    detail = "x=pi limit";
  }
  for (double d : deltas) {
    double c = std::cos(d / 2.0);
    if (std::abs(law_var4(Angle(d), Angle(0.0), 0.05) - c * c) > 0.01) {
      ok = false;
      detail = "x=0.05 small-interval limit at delta=" + std::to_string(d);
    }
  }
  report(6, "interval-knowledge law (1 + cos(delta) sin(x)/x)/2 on a 4x4 grid", ok, detail);
}

void criterion_7_variation5() {
  RngStream rng(7, 0);
  Var5OrderStats st = var5_order_experiment(3.0, 1.0, kTrials, rng);
  bool ok = true;
  std::string detail;
  if (st.p_fh.mean() != 0.0) {
    ok = false;
    detail = "f then h produced a double +1";
  }
  double se = std::sqrt(st.p_f.std_error() * st.p_f.std_error() +
                        st.p_fgh.std_error() * st.p_fgh.std_error());
  if (std::abs(st.p_fgh.mean() - st.p_f.mean()) > 4.0 * se + 1e-12) {
    ok = false;
    detail = "order-insensitive path diverged from p_f";
  }
  if (!within_sigma(st.p_f, 2.0 / 3.0)) {
    ok = false;
    detail = "p_f=" + std::to_string(st.p_f.mean());
  }
  report(7, "fixed charges q1=3,q2=1: p(f,h)=0 exact, p(f,g,h)=p(f)=2/3", ok, detail);
}

void criterion_8_pitowsky() {
  Angle theta(pi / 3);
  RngStream r1(8, 0), r2(8, 1), r3(8, 2);
  FrequencyResult par = frequency_experiment(ColoringModel::ParallelLaw, theta, kTrials, r1);
  FrequencyResult ind = frequency_experiment(ColoringModel::IndependentFair, theta, kTrials, r2);
  FrequencyResult arc = frequency_experiment(ColoringModel::HalfArc, theta, kTrials, r3);
  bool ok = within_sigma(par.average, 0.5) && within_sigma(ind.average, 0.0) &&
            within_sigma(arc.average, 1.0 / 3.0);
  auto sep = [](const FrequencyResult& a, const FrequencyResult& b) {
    double se = std::sqrt(a.average.std_error() * a.average.std_error() +
                          b.average.std_error() * b.average.std_error());
    return std::abs(a.average.mean() - b.average.mean()) / se;
  };
  ok = ok && sep(par, ind) > 8.0 && sep(par, arc) > 8.0 && sep(ind, arc) > 8.0;
  char detail[128];
  std::snprintf(detail, sizeof detail, "means: %.4f / %.4f / %.4f", par.average.mean(),
                ind.average.mean(), arc.average.mean());
  report(8, "conditioned frequencies reach 1/2, 0, 1/3 and are mutually separated", ok, detail);
}

void criterion_9_feasibility() {
  bool ok = true;
  std::string detail;

  FeasibilityResult fair = feasibility(JointTable{});
  if (!fair.feasible || !fair.witness) {
    ok = false;
    detail = "independent-fair not feasible";
  } else {
    JointTable back = fair.witness->table();
    if (std::abs(back.p_e - 0.5) > 1e-12 || std::abs(back.j_ef - 0.25) > 1e-12) {
      ok = false;
      detail = "witness does not reproduce the table";
    }
  }

  double j = 0.5 * std::pow(std::cos(pi / 3), 2);
  FeasibilityResult seq = feasibility(JointTable{0.5, 0.5, 0.5, j, j, j});
  if (seq.feasible || seq.certificate.empty() || !(seq.slack < 0.0)) {
    ok = false;
    detail = "120-degree sequential table not certified infeasible";
  }

  JointTable v4 = build_var4_table(pi / 4, Angle(pi / 3), Angle(0.0), Angle(2 * pi / 3));
  if (std::abs(v4.j_ef - 0.25) > 1e-12) {
    ok = false;
    detail = "cross joint is not 1/4";
  }
  FeasibilityResult fv4 = feasibility(v4);
  if (!fv4.feasible) {
    ok = false;
    detail = "interval-knowledge table not feasible";
  }
  report(9, "joint-measure verdicts: fair yes, 120-degree sequential no, interval yes", ok,
         detail);
}

void criterion_10_chsh() {
  bool ok = true;
  std::string detail;
  ChshSetting setting{Angle(0.0), Angle(pi / 2), Angle(pi / 4), Angle(3 * pi / 4)};

  RngStream rng(10, 0);
  ChshResult seq = postselected_chsh(setting, PairModel::SequentialAerts, kTrials, rng);
  double se = std::sqrt(4.0 / static_cast<double>(kTrials));  // Var(E) <= 1/n per setting
  if (!seq.defined || std::abs(seq.s - 2.0 * std::sqrt(2.0)) > 4.0 * se) {
    ok = false;
    detail = "sequential S=" + std::to_string(seq.s);
  }

  RngStream rng2(10, 1);
  ChshResult prod = postselected_chsh(setting, PairModel::ProductMeasure, kTrials, rng2);
  if (!prod.defined || std::abs(prod.s) > 2.0 + 4.0 * se) {
    ok = false;
    detail = "product S=" + std::to_string(prod.s);
  }

  // Any table carried by one 8-atom measure keeps every CHSH assignment of
  // the three observables (with one reused) at |S| <= 2.
  RngStream rng3(10, 2);
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    AtomMeasure m;
    double total = 0.0;
    for (double& v : m.mass) {
      v = rng3.next_double();
      total += v;
    }
    for (double& v : m.mass) v /= total;
    JointTable tb = m.table();
    if (!feasibility(tb).feasible) {
      ok = false;
      detail = "measure-derived table reported infeasible";
      break;
    }
    double e[3][3];
    double pe[3] = {tb.p_e, tb.p_f, tb.p_g};
    double jj[3][3] = {{0, tb.j_ef, tb.j_eg}, {tb.j_ef, 0, tb.j_fg}, {tb.j_eg, tb.j_fg, 0}};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        e[i][k] = i == k ? 1.0 : pair_correlation(pe[i], pe[k], jj[i][k]);
    for (int a = 0; a < 3; ++a)
      for (int ap = 0; ap < 3; ++ap)
        for (int b = 0; b < 3; ++b)
          for (int bp = 0; bp < 3; ++bp) {
            double s = chsh(e[a][b], e[a][bp], e[ap][b], e[ap][bp]);
            if (std::abs(s) > 2.0 + 1e-12) {
              ok = false;
              detail = "feasible table exceeded the classical bound: S=" + std::to_string(s);
            }
          }
  }
  report(10, "CHSH: sequential 2*sqrt(2), product <= 2, joint-measure tables <= 2", ok, detail);
}

void criterion_11_infrastructure() {
  bool ok = true;
  std::string detail;

  ExperimentConfig cfg;
  cfg.experiment = "sequential-conditional";
  cfg.trials = 20000;
  cfg.seed = 11;
  if (to_json(run(cfg)) != to_json(run(cfg))) {
    ok = false;
    detail = "replay is not byte-identical";
  }

  RngStream rng(11, 0);
  EstimatorSummary a, b, all;
  for (int i = 0; i < 5000; ++i) {
    double x = rng.uniform(-2.0, 9.0);
    (i % 2 ? a : b).add(x);
    all.add(x);
  }
  EstimatorSummary m = EstimatorSummary::merged(a, b);
  if (std::abs(m.mean() - all.mean()) > 1e-12 * std::abs(all.mean()) ||
      std::abs(m.sample_variance() - all.sample_variance()) >
          1e-12 * all.sample_variance() ||
      m.count() != all.count()) {
    ok = false;
    detail = "merge is not exact to 1e-12 relative";
  }

  RngStream rng2(11, 1);
  EstimatorSummary quarter, full;
  for (int i = 0; i < 25000; ++i) quarter.add(rng2.next_sign());
  for (int i = 0; i < 100000; ++i) full.add(rng2.next_sign());
  double ratio = quarter.std_error() / full.std_error();
  if (ratio < 2.0 / 1.25 || ratio > 2.0 * 1.25) {
    ok = false;
    detail = "std-error ratio " + std::to_string(ratio) + " outside [1.6, 2.5]";
  }
  report(11, "replay byte-identical; merge exact; std error halves at 4x trials", ok, detail);
}

}  // namespace

int main() {
  criterion_1_first_law();
  criterion_2_sequential();
  criterion_3_marginal();
  criterion_4_variation1();
  criterion_5_variation2();
  criterion_6_variation4();
  criterion_7_variation5();
  criterion_8_pitowsky();
  criterion_9_feasibility();
  criterion_10_chsh();
  criterion_11_infrastructure();
  std::printf("%s: %d of 11 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES",
              failures);
  return failures;
}
