#include "pfs/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfs/oracle.hpp"

namespace pfs {

namespace {

constexpr double kDegenerateTol = 1e-9;

void check_rates(double rho, double sigma) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw RateOutOfRange("forgery rate must satisfy rho >= 0");
  }
  if (!(sigma >= 0.0) || !(sigma < 1.0)) {
    throw RateOutOfRange("suppression rate must satisfy 0 <= sigma < 1");
  }
}

// Smallest j (1-based) whose suppression cell (sigma_j, sigma_{j-1}] contains
// sigma; empty cells from tied thresholds are skipped by construction. At
// sigma = 0 this returns the first index of the zero tail, i.e. the number of
// maximal tied ratios determines n - j + 1.
std::size_t scan_j(const ThresholdTable& table, double sigma) {
  const std::size_t n = table.sigma_thr.size();
  for (std::size_t j = 1; j <= n; ++j) {
    const double thr = table.sigma_thr[j - 1];
    if (sigma > 0.0 ? thr < sigma : thr <= 0.0) return j;
  }
  return n;  // sigma_n = 0 makes this unreachable
}

// Largest cell index i (1-based count of forgery-active categories) for the
// given rho; at rho = 0 the count of minimal tied ratios.
std::size_t scan_i(const ThresholdTable& table, double rho) {
  std::size_t i = 0;
  for (double thr : table.rho_thr) {
    if (rho > 0.0 ? thr < rho : thr <= 0.0) ++i;
  }
  return i;
}

double critical_rho_for_j(const ThresholdTable& table, std::size_t j,
                          double sigma) {
  const std::size_t jj = std::max<std::size_t>(j, 2);
  const auto& line = table.crit_lines[jj - 2];
  return std::max(0.0, line.m * sigma + line.b);
}

bool degenerate(const CanonicalView& view) {
  for (std::size_t k = 0; k < view.size(); ++k) {
    if (std::abs(view.q[k] - view.p[k]) > kDegenerateTol) return false;
  }
  return true;
}

std::pair<double, double> ratios_for_cell(const CanonicalView& view,
                                          std::size_t i, std::size_t j,
                                          double rho, double sigma) {
  const double scale = 1.0 + rho - sigma;
  const double phi =
      i >= 1 ? (view.cum_q(i) + rho) / (scale * view.cum_p(i)) : 1.0;
  const double chi = j <= view.size()
                         ? (view.tail_q(j) - sigma) / (scale * view.tail_p(j))
                         : 1.0;
  return {phi, chi};
}

void fill_reduced(const CanonicalView& view, std::size_t i, std::size_t j,
                  Solution& sol) {
  sol.reduced_q.clear();
  sol.reduced_p.clear();
  if (i >= 1) {
    sol.reduced_q.push_back(view.cum_q(i));
    sol.reduced_p.push_back(view.cum_p(i));
  }
  for (std::size_t k = i + 1; k < j; ++k) {
    sol.reduced_q.push_back(view.q[k - 1]);
    sol.reduced_p.push_back(view.p[k - 1]);
  }
  if (j <= view.size()) {
    sol.reduced_q.push_back(view.tail_q(j));
    sol.reduced_p.push_back(view.tail_p(j));
  }
}

Strategy closed_form(const CanonicalView& view, std::size_t i, std::size_t j,
                     double rho, double sigma) {
  const std::size_t n = view.size();
  Strategy strat{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  if (i >= 1) {
    const double level = (view.cum_q(i) + rho) / view.cum_p(i);
    for (std::size_t k = 0; k < i; ++k) {
      strat.r[k] = std::max(0.0, view.p[k] * level - view.q[k]);
    }
  }
  if (j <= n) {
    const double level = (view.tail_q(j) - sigma) / view.tail_p(j);
    for (std::size_t k = j - 1; k < n; ++k) {
      strat.s[k] = std::max(0.0, view.q[k] - view.p[k] * level);
    }
  }
  return strat;
}

}  // namespace

double ThresholdTable::rho_at(std::size_t i) const {
  if (i == 0 || i > rho_thr.size() + 1) {
    throw RateOutOfRange("forgery threshold index out of range");
  }
  if (i == rho_thr.size() + 1) return std::numeric_limits<double>::infinity();
  return rho_thr[i - 1];
}

double ThresholdTable::sigma_at(std::size_t j) const {
  if (j == 0) return kSigma0;
  if (j > sigma_thr.size()) {
    throw RateOutOfRange("suppression threshold index out of range");
  }
  return sigma_thr[j - 1];
}

ThresholdTable thresholds(const CanonicalView& view) {
  const std::size_t n = view.size();
  ThresholdTable table;
  table.rho_thr.resize(n);
  table.sigma_thr.resize(n);
  table.rho_thr[0] = 0.0;
  table.sigma_thr[n - 1] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    table.rho_thr[k] = view.P[k] * view.ratios[k] - view.Q[k];
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    table.sigma_thr[k] = view.Qbar[k] - view.Pbar[k] * view.ratios[k];
  }
  table.crit_lines.resize(n - 1);
  for (std::size_t j = 2; j <= n; ++j) {
    table.crit_lines[j - 2] = {
        -view.cum_p(j - 1) / view.tail_p(j),
        (view.cum_p(j - 1) - view.cum_q(j - 1)) / view.tail_p(j)};
  }
  return table;
}

double critical_rho(const ThresholdTable& table, double sigma) {
  if (!(sigma >= 0.0) || !(sigma < 1.0)) {
    throw RateOutOfRange("suppression rate must satisfy 0 <= sigma < 1");
  }
  return critical_rho_for_j(table, scan_j(table, sigma), sigma);
}

RegionClass classify(const ThresholdTable& table, double rho, double sigma) {
  check_rates(rho, sigma);
  const std::size_t j = scan_j(table, sigma);
  const double rc = critical_rho_for_j(table, j, sigma);
  RegionKind kind;
  if (std::abs(rho - rc) <= kSumTol) {
    kind = RegionKind::kBoundary;
  } else if (rho > rc) {
    kind = RegionKind::kCriticalInterior;
  } else {
    kind = RegionKind::kNonCritical;
  }
  const std::size_t i = std::min(scan_i(table, rho), j - 1);
  return RegionClass{kind, i, j, rc};
}

Solution solve(const CanonicalView& view, const ThresholdTable& table,
               double rho, double sigma, InteriorPolicy policy) {
  check_rates(rho, sigma);
  const std::size_t n = view.size();

  if (degenerate(view)) {
    Solution sol{Strategy{std::vector<double>(n, 0.0),
                          std::vector<double>(n, 0.0)},
                 view.q,
                 0.0,
                 RegionClass{RegionKind::kBoundary, 0, n + 1, 0.0},
                 1.0,
                 1.0,
                 {},
                 {},
                 0.0,
                 true};
    return sol;
  }

  const RegionClass region = classify(table, rho, sigma);

  if (region.kind == RegionKind::kCriticalInterior) {
    if (policy == InteriorPolicy::kEconomical) {
      const RegionClass at_boundary = classify(table, region.rho_crit, sigma);
      Strategy strat =
          closed_form(view, at_boundary.i, at_boundary.j, region.rho_crit,
                      sigma);
      Pmf t = apparent_profile(view, strat);
      Solution sol{std::move(strat), t, kl_divergence(t, view.p), region,
                   1.0,  1.0,        {}, {}, rho - region.rho_crit, false};
      fill_reduced(view, at_boundary.i, at_boundary.j, sol);
      return sol;
    }
    // Exact budgets: target u = (1 + rho - sigma) p, positive/negative part
    // split, remaining budget padded proportionally to p on both sides.
    const double scale = 1.0 + rho - sigma;
    std::vector<double> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = scale * view.p[k];
    Strategy strat = reconstruct_strategy(view, u, rho, sigma);
    Pmf t = apparent_profile(view, strat);
    Solution sol{std::move(strat), t, kl_divergence(t, view.p), region,
                 1.0,  1.0,        {}, {}, 0.0, false};
    fill_reduced(view, region.i, region.j, sol);
    return sol;
  }

  Strategy strat = closed_form(view, region.i, region.j, rho, sigma);
  Pmf t = apparent_profile(view, strat);
  const auto [phi, chi] =
      ratios_for_cell(view, region.i, region.j, rho, sigma);
  Solution sol{std::move(strat), t,   kl_divergence(t, view.p), region,
               phi,  chi,        {},  {}, 0.0, false};
  fill_reduced(view, region.i, region.j, sol);
  return sol;
}

Solution solve(const CanonicalView& view, double rho, double sigma,
               InteriorPolicy policy) {
  return solve(view, thresholds(view), rho, sigma, policy);
}

std::pair<double, double> proportionality(const CanonicalView& view,
                                          const RegionClass& region,
                                          double rho, double sigma) {
  if (region.kind == RegionKind::kCriticalInterior) {
    throw RegionError(
        "proportionality constants are defined on the closure of the "
        "noncritical region only");
  }
  return ratios_for_cell(view, region.i, region.j, rho, sigma);
}

KktCertificate kkt_certificate(const CanonicalView& view,
                               const Strategy& strat, double tol) {
  validate_strategy(view, strat);
  const std::size_t n = view.size();
  const Pmf t = apparent_profile(view, strat);

  KktCertificate cert;
  cert.g.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    cert.g[k] = std::log2(t[k] / view.p[k]);
  }

  const double g_min = *std::min_element(cert.g.begin(), cert.g.end());
  const double g_max = *std::max_element(cert.g.begin(), cert.g.end());

  double forge_lo = std::numeric_limits<double>::infinity();
  double forge_hi = -std::numeric_limits<double>::infinity();
  double supp_lo = std::numeric_limits<double>::infinity();
  double supp_hi = -std::numeric_limits<double>::infinity();
  bool any_forge = false, any_supp = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (strat.r[k] > tol) {
      any_forge = true;
      forge_lo = std::min(forge_lo, cert.g[k]);
      forge_hi = std::max(forge_hi, cert.g[k]);
    }
    if (strat.s[k] > tol) {
      any_supp = true;
      supp_lo = std::min(supp_lo, cert.g[k]);
      supp_hi = std::max(supp_hi, cert.g[k]);
    }
  }
  cert.psi = any_forge ? forge_hi : g_min;
  cert.omega = any_supp ? supp_lo : g_max;

  double violation = 0.0;
  if (any_forge) violation = std::max(violation, forge_hi - forge_lo);
  if (any_supp) violation = std::max(violation, supp_hi - supp_lo);
  for (std::size_t k = 0; k < n; ++k) {
    if (strat.r[k] > tol || strat.s[k] > tol) continue;
    violation = std::max(violation, cert.psi - cert.g[k]);
    violation = std::max(violation, cert.g[k] - cert.omega);
  }
  violation = std::max(violation, cert.psi - cert.omega);

  cert.max_violation = violation;
  cert.valid = violation <= tol;
  return cert;
}

}  // namespace pfs
