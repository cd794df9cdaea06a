#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfs/errors.hpp"

namespace pfs {

// Tolerances shared across the library. Invariant checks use kSumTol,
// construction accepts round-off up to kNormalizeTol, and nonnegativity
// after arithmetic is allowed kNonNegSlack of headroom.
inline constexpr double kSumTol = 1e-9;
inline constexpr double kNormalizeTol = 1e-6;
inline constexpr double kNonNegSlack = 1e-12;

// A probability mass function over n >= 2 categories.
// Components are nonnegative and sum to one; construction renormalizes
// inputs whose sum deviates from one by at most kNormalizeTol and rejects
// anything further off.
class Pmf {
 public:
  explicit Pmf(std::vector<double> mass);
  static Pmf uniform(std::size_t n);

  std::size_t size() const { return mass_.size(); }
  double operator[](std::size_t k) const { return mass_[k]; }
  const std::vector<double>& mass() const { return mass_; }

 private:
  std::vector<double> mass_;
};

// A profile pair (q, p) re-indexed so the ratios q_k/p_k are nondecreasing,
// together with cumulative and complementary cumulative sums. All closed-form
// results are stated in this order.
struct CanonicalView {
  std::vector<std::size_t> permutation;  // canonical index -> original index
  Pmf q;
  Pmf p;
  std::vector<double> ratios;  // q_k / p_k, nondecreasing
  std::vector<double> Q;       // Q[k] = sum_{m<=k} q_m (0-based inclusive)
  std::vector<double> P;
  std::vector<double> Qbar;  // Qbar[k] = sum_{m>=k} q_m
  std::vector<double> Pbar;

  std::size_t size() const { return permutation.size(); }

  // 1-based accessors matching the analysis: cum_q(0) = 0, tail_q(n+1) = 0.
  double cum_q(std::size_t i) const { return i == 0 ? 0.0 : Q[i - 1]; }
  double cum_p(std::size_t i) const { return i == 0 ? 0.0 : P[i - 1]; }
  double tail_q(std::size_t j) const { return j > size() ? 0.0 : Qbar[j - 1]; }
  double tail_p(std::size_t j) const { return j > size() ? 0.0 : Pbar[j - 1]; }

  // Scatter canonical-order values back to the original category order.
  std::vector<double> to_original(std::span<const double> canonical) const;
  // Gather original-order values into canonical order.
  std::vector<double> to_canonical(std::span<const double> original) const;
};

// Per-category forgery and suppression allocations, in canonical order.
struct Strategy {
  std::vector<double> r;
  std::vector<double> s;

  double rho() const;
  double sigma() const;
};

// Re-indexes (q, p) by nondecreasing ratio with a stable tie-break on the
// original index. Throws PositivityViolation (listing the offending original
// categories) or DimensionMismatch.
CanonicalView canonicalize(const Pmf& q, const Pmf& p);

// Kullback-Leibler divergence in bits, with 0 log 0 = 0.
// Throws SupportViolation where a_k > 0 and b_k = 0.
double kl_divergence(const Pmf& a, const Pmf& b);

// Throws FeasibilityViolation unless r, s >= 0, q + r - s >= 0 componentwise
// and sigma < 1.
void validate_strategy(const CanonicalView& view, const Strategy& strat);

// t = (q + r - s) / (1 + rho - sigma), in canonical order.
// Throws InvariantViolation if any q_k + r_k - s_k < -kNonNegSlack.
Pmf apparent_profile(const CanonicalView& view, const Strategy& strat);

}  // namespace pfs
