#include "pfs/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace pfs {

namespace {

constexpr double kDegenerateDivergence = 1e-12;

double checked_divergence(const CanonicalView& view) {
  const double d = kl_divergence(view.q, view.p);
  if (d <= kDegenerateDivergence) {
    throw DegenerateInput(
        "q equals p; decrement factors are undefined at zero divergence");
  }
  return d;
}

}  // namespace

LowRateReport low_rate_report(const CanonicalView& view) {
  const double d = checked_divergence(view);
  const std::size_t n = view.size();
  const double log_lo = std::log2(view.ratios[0]);
  const double log_hi = std::log2(view.ratios[n - 1]);
  return LowRateReport{d, log_lo - d, d - log_hi, 1.0 - log_lo / d,
                       log_hi / d - 1.0};
}

double taylor_risk(const CanonicalView& view, double rho, double sigma) {
  const LowRateReport report = low_rate_report(view);
  const double value =
      report.divergence *
      (1.0 - report.delta_rho * rho - report.delta_sigma * sigma);
  return std::max(value, 0.0);
}

PureStrategyReport pure_strategy_report(const CanonicalView& view) {
  const double d = checked_divergence(view);
  const std::size_t n = view.size();
  const double lo = view.ratios[0];
  const double hi = view.ratios[n - 1];
  const LowRateReport low = low_rate_report(view);
  PureStrategyReport report;
  report.rho_crit_pure = hi - 1.0;
  report.sigma_crit_pure = 1.0 - lo;
  report.prefer_forgery_for_critical =
      report.rho_crit_pure < report.sigma_crit_pure;
  report.prefer_forgery_low_rate = low.delta_rho > low.delta_sigma;
  report.arith_mean = 0.5 * (lo + hi);
  report.geom_mean = std::sqrt(lo * hi);
  report.two_pow_divergence = std::exp2(d);
  return report;
}

}  // namespace pfs
