#pragma once

#include "pfs/profile.hpp"

namespace pfs {

// First-order behaviour of the risk surface at the origin: the gradient and
// the relative decrement factors delta_rho = -dR/drho / R(0,0) and
// delta_sigma = -dR/dsigma / R(0,0). In canonical order these depend only on
// the extreme ratios q_1/p_1 and q_n/p_n together with D(q||p).
struct LowRateReport {
  double divergence;   // D(q||p) in bits
  double grad_rho;     // log2(q_1/p_1) - D(q||p)
  double grad_sigma;   // D(q||p) - log2(q_n/p_n)
  double delta_rho;    // > 1 whenever q != p
  double delta_sigma;  // > 0 whenever q != p
};

// Rates at which a single mechanism reaches the critical region, and which
// mechanism wins at low rates or for reaching the region with least
// distortion.
struct PureStrategyReport {
  double rho_crit_pure;    // q_n/p_n - 1
  double sigma_crit_pure;  // 1 - q_1/p_1
  bool prefer_forgery_for_critical;  // rho_crit_pure < sigma_crit_pure
  bool prefer_forgery_low_rate;      // delta_rho > delta_sigma
  double arith_mean;  // of q_1/p_1 and q_n/p_n
  double geom_mean;
  double two_pow_divergence;  // 2^D(q||p), compared against geom_mean
};

// Throws DegenerateInput when D(q||p) <= 1e-12.
LowRateReport low_rate_report(const CanonicalView& view);

// First-order risk model D(q||p) (1 - delta_rho rho - delta_sigma sigma),
// clamped below at zero. Throws DegenerateInput.
double taylor_risk(const CanonicalView& view, double rho, double sigma);

// Throws DegenerateInput.
PureStrategyReport pure_strategy_report(const CanonicalView& view);

}  // namespace pfs
