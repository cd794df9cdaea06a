#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "pfs/profile.hpp"

namespace pfs {

// Forgery thresholds rho_i, suppression thresholds sigma_j and the
// piecewise-linear critical line rho_crit(sigma) = m_j * sigma + b_j.
struct ThresholdTable {
  std::vector<double> rho_thr;    // rho_1..rho_n, rho_1 = 0
  std::vector<double> sigma_thr;  // sigma_1..sigma_n, sigma_n = 0

  struct CritLine {
    double m;  // -P_{j-1} / Pbar_j
    double b;  // (P_{j-1} - Q_{j-1}) / Pbar_j
  };
  std::vector<CritLine> crit_lines;  // index j-2 holds the line for j = 2..n

  static constexpr double kSigma0 = 1.0;  // sentinel sigma_0

  // 1-based lookup with the explicit +infinity sentinel at i = n+1.
  double rho_at(std::size_t i) const;
  double sigma_at(std::size_t j) const;  // sigma_at(0) = 1
};

enum class RegionKind { kNonCritical, kBoundary, kCriticalInterior };

// Index cell of a rate pair. i counts the forgery-active canonical
// categories (0 = none); suppression is active on categories j..n
// (j = n+1 = none; j = 1, all categories, occurs only for sigma >= sigma_1).
struct RegionClass {
  RegionKind kind;
  std::size_t i;
  std::size_t j;
  double rho_crit;  // critical forgery rate at this sigma, clamped at 0
};

enum class InteriorPolicy { kExactBudget, kEconomical };

struct Solution {
  Strategy strategy;  // canonical order
  Pmf t;              // optimal apparent profile, canonical order
  double risk;        // D(t || p) in bits
  RegionClass region;
  double phi;
  double chi;
  // Aggregated (j-i+1)-dimensional distributions; the head entry Q_i is
  // present iff region.i >= 1 and the tail entry Qbar_j iff region.j <= n.
  std::vector<double> reduced_q;
  std::vector<double> reduced_p;
  double unused_rho;       // nonzero only under kEconomical in the interior
  bool already_critical;   // q = p input: zero strategy, risk 0
};

// Optimality certificate in terms of g_k = log2(t_k / p_k), a strictly
// increasing transform of the objective's per-category derivative.
struct KktCertificate {
  double psi;
  double omega;
  std::vector<double> g;
  double max_violation;
  bool valid;
};

ThresholdTable thresholds(const CanonicalView& view);

// Value of the critical line at sigma in [0, 1); zero once pure suppression
// already reaches the critical region. Throws RateOutOfRange.
double critical_rho(const ThresholdTable& table, double sigma);

RegionClass classify(const ThresholdTable& table, double rho, double sigma);

Solution solve(const CanonicalView& view, const ThresholdTable& table,
               double rho, double sigma,
               InteriorPolicy policy = InteriorPolicy::kExactBudget);
Solution solve(const CanonicalView& view, double rho, double sigma,
               InteriorPolicy policy = InteriorPolicy::kExactBudget);

// Common apparent-to-population ratios (phi on the forgery side, chi on the
// suppression side). Throws RegionError for critical-interior regions.
std::pair<double, double> proportionality(const CanonicalView& view,
                                          const RegionClass& region,
                                          double rho, double sigma);

// Checks dual optimality and complementary slackness of a feasible strategy:
// g equal across active categories of each kind, psi <= g_k <= omega on
// inactive ones and psi <= omega, all within tol. Activity means a component
// exceeds tol. Throws FeasibilityViolation.
KktCertificate kkt_certificate(const CanonicalView& view,
                               const Strategy& strat, double tol);

}  // namespace pfs
