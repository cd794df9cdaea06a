#include "pfs/profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pfs {

namespace {

double stable_sum(std::span<const double> v) {
  // Kahan summation; cumulative quantities feed threshold formulas where
  // drift would show up as spurious ties.
  double sum = 0.0, c = 0.0;
  for (double x : v) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

Pmf::Pmf(std::vector<double> mass) : mass_(std::move(mass)) {
  if (mass_.size() < 2) {
    throw DimensionMismatch("a PMF needs at least 2 categories, got " +
                            std::to_string(mass_.size()));
  }
  for (std::size_t k = 0; k < mass_.size(); ++k) {
    if (!(mass_[k] >= -kNonNegSlack) || !std::isfinite(mass_[k])) {
      throw InvariantViolation("PMF component " + std::to_string(k) +
                               " is negative or not finite");
    }
    if (mass_[k] < 0.0) mass_[k] = 0.0;
  }
  const double sum = stable_sum(mass_);
  if (std::abs(sum - 1.0) > kNormalizeTol) {
    throw InvariantViolation("PMF mass sums to " + std::to_string(sum) +
                             ", outside the accepted deviation of 1e-6");
  }
  for (double& x : mass_) x /= sum;
}

Pmf Pmf::uniform(std::size_t n) {
  return Pmf(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

std::vector<double> CanonicalView::to_original(
    std::span<const double> canonical) const {
  std::vector<double> out(canonical.size());
  for (std::size_t k = 0; k < canonical.size(); ++k) {
    out[permutation[k]] = canonical[k];
  }
  return out;
}

std::vector<double> CanonicalView::to_canonical(
    std::span<const double> original) const {
  std::vector<double> out(original.size());
  for (std::size_t k = 0; k < original.size(); ++k) {
    out[k] = original[permutation[k]];
  }
  return out;
}

double Strategy::rho() const { return stable_sum(r); }
double Strategy::sigma() const { return stable_sum(s); }

CanonicalView canonicalize(const Pmf& q, const Pmf& p) {
  if (q.size() != p.size()) {
    throw DimensionMismatch("profile has " + std::to_string(q.size()) +
                            " categories, population has " +
                            std::to_string(p.size()));
  }
  const std::size_t n = q.size();
  std::vector<std::size_t> offending;
  for (std::size_t k = 0; k < n; ++k) {
    if (q[k] <= 0.0 || p[k] <= 0.0) offending.push_back(k);
  }
  if (!offending.empty()) {
    std::string msg = "strict positivity violated at categories:";
    for (std::size_t k : offending) msg += " " + std::to_string(k);
    throw PositivityViolation(std::move(msg), std::move(offending));
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return q[a] / p[a] < q[b] / p[b];
  });

  std::vector<double> qc(n), pc(n), ratios(n);
  for (std::size_t k = 0; k < n; ++k) {
    qc[k] = q[perm[k]];
    pc[k] = p[perm[k]];
    ratios[k] = qc[k] / pc[k];
  }

  CanonicalView view{std::move(perm), Pmf(qc), Pmf(pc), std::move(ratios),
                     {}, {}, {}, {}};
  view.Q.resize(n);
  view.P.resize(n);
  view.Qbar.resize(n);
  view.Pbar.resize(n);
  double aq = 0.0, ap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    aq += view.q[k];
    ap += view.p[k];
    view.Q[k] = aq;
    view.P[k] = ap;
  }
  double bq = 0.0, bp = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    bq += view.q[k];
    bp += view.p[k];
    view.Qbar[k] = bq;
    view.Pbar[k] = bp;
  }
  return view;
}

double kl_divergence(const Pmf& a, const Pmf& b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("KL divergence needs equal dimensions");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] <= 0.0) continue;
    if (b[k] <= 0.0) {
      throw SupportViolation("a_k > 0 with b_k = 0 at category " +
                             std::to_string(k));
    }
    sum += a[k] * std::log2(a[k] / b[k]);
  }
  // Gibbs' inequality: tiny negatives are pure rounding noise.
  if (sum < 0.0 && sum > -kNonNegSlack) sum = 0.0;
  return sum;
}

void validate_strategy(const CanonicalView& view, const Strategy& strat) {
  const std::size_t n = view.size();
  if (strat.r.size() != n || strat.s.size() != n) {
    throw FeasibilityViolation("strategy dimension mismatch");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(strat.r[k] >= -kNonNegSlack) || !(strat.s[k] >= -kNonNegSlack)) {
      throw FeasibilityViolation("negative strategy component at category " +
                                 std::to_string(k));
    }
    if (view.q[k] + strat.r[k] - strat.s[k] < -kNonNegSlack) {
      throw FeasibilityViolation("q_k + r_k - s_k < 0 at category " +
                                 std::to_string(k));
    }
  }
  if (!(strat.sigma() < 1.0)) {
    throw FeasibilityViolation("suppression rate must stay below 1");
  }
}

Pmf apparent_profile(const CanonicalView& view, const Strategy& strat) {
  const std::size_t n = view.size();
  if (strat.r.size() != n || strat.s.size() != n) {
    throw DimensionMismatch("strategy dimension mismatch");
  }
  const double scale = 1.0 + strat.rho() - strat.sigma();
  if (!(scale > 0.0)) {
    throw RateOutOfRange("1 + rho - sigma must be positive");
  }
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = view.q[k] + strat.r[k] - strat.s[k];
    if (u < -kNonNegSlack) {
      throw InvariantViolation("q_k + r_k - s_k < 0 at category " +
                               std::to_string(k));
    }
    t[k] = std::max(u, 0.0) / scale;
  }
  return Pmf(std::move(t));
}

}  // namespace pfs
