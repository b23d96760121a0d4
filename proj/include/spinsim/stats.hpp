#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace spinsim {

/// Single-pass mean/variance accumulator (Welford) with exact pairwise merge.
class EstimatorSummary {
 public:
  void add(double x) {
    ++n_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(n_);
    m2_ += delta * (x - mean_);
  }

  /// Merge: equivalent to accumulating the concatenated samples.
  static EstimatorSummary merged(const EstimatorSummary& a, const EstimatorSummary& b) {
    if (a.n_ == 0) return b;
    if (b.n_ == 0) return a;
    EstimatorSummary out;
    out.n_ = a.n_ + b.n_;
    double na = static_cast<double>(a.n_), nb = static_cast<double>(b.n_);
    double delta = b.mean_ - a.mean_;
    out.mean_ = a.mean_ + delta * nb / (na + nb);
    out.m2_ = a.m2_ + b.m2_ + delta * delta * na * nb / (na + nb);
    return out;
  }

  std::size_t count() const { return n_; }

  double mean() const { return mean_; }

  double sample_variance() const {
    if (n_ < 2) return 0.0;
    return m2_ / static_cast<double>(n_ - 1);
  }

  double std_error() const {
    if (n_ == 0) return 0.0;
    return std::sqrt(sample_variance() / static_cast<double>(n_));
  }

  struct Interval {
    double lo, hi;
  };

  Interval ci95() const {
    double h = 1.96 * std_error();
    return {mean_ - h, mean_ + h};
  }

  /// (mean - reference) / std_error; 0 when exact and matching, inf when
  /// exact and off.
  double z_score(double reference) const {
    double se = std_error();
    double d = mean_ - reference;
    if (se == 0.0) {
      return d == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return d / se;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

inline bool within_sigma(const EstimatorSummary& s, double reference, double k = 4.0) {
  return std::abs(s.z_score(reference)) <= k;
}

}  // namespace spinsim
