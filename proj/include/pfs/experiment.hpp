#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pfs/analysis.hpp"
#include "pfs/io.hpp"
#include "pfs/movielens.hpp"
#include "pfs/solver.hpp"

namespace pfs {

// ---------------------------------------------------------------------------
// Built-in three-category example with reference values baked in.

struct CheckItem {
  std::string label;
  double got;
  double want;
  double tol;
  bool pass;
};

struct PanelResult {
  double rho;
  double sigma;
  double rho_over_crit;
  Solution solution;
};

struct ExampleReport {
  Pmf q;
  Pmf p;
  ThresholdTable table;
  double initial_risk;
  LowRateReport low;
  PureStrategyReport pure;
  std::vector<PanelResult> panels;
  std::vector<CheckItem> checks;
  bool ok;
};

// Solves the built-in example end to end and compares every quantity against
// its reference value. `ok` is false if any check misses its tolerance.
ExampleReport run_example();

// Deterministic plain-text rendering; identical bytes on every run.
std::string format_example_report(const ExampleReport& report);

// ---------------------------------------------------------------------------
// Grid computations.

// Risk via the reduced closed-form expression, without materializing the
// strategy. Matches solve().risk to within 1e-9.
double optimal_risk(const CanonicalView& view, const ThresholdTable& table,
                    double rho, double sigma);

SurfaceGrid compute_surface(const CanonicalView& view, const GridSpec& grid);

// Inclusive-method percentile with linear interpolation between the closest
// order statistics; `sorted` must be ascending, `p` in [0, 100].
double percentile(const std::vector<double>& sorted, double p);

// One surface of relative risk reduction (in percent) per requested
// percentile, over the store's positivity-eligible users at common rates.
struct PercentileSurfaces {
  std::vector<double> percentiles;
  std::vector<SurfaceGrid> surfaces;
};
PercentileSurfaces compute_percentiles(const UserProfileSet& profiles,
                                       const GridSpec& grid,
                                       const std::vector<double>& percentiles,
                                       unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Population statistics over the eligible users.

struct UserStat {
  std::int64_t user_id;
  double d0;
  double delta_rho;
  double delta_sigma;
  double rho_n;
  double sigma_1;
  bool degenerate;  // q = p; excluded from the factor statistics
};

struct Aggregate {
  double min;
  double max;
  double mean;
};

struct PopulationStats {
  std::vector<UserStat> users;
  Aggregate d0;
  Aggregate delta_rho;
  Aggregate delta_sigma;
  Aggregate rho_n;
  Aggregate sigma_1;
  double frac_delta_rho_gt_delta_sigma;
  double frac_delta_rho_ge_30;
  double frac_delta_sigma_ge_30;
  double frac_prefer_suppression_critical;
  std::size_t degenerate_count;
  std::size_t eligible_count;
};

PopulationStats compute_population_stats(const UserProfileSet& profiles);
nlohmann::json population_stats_to_json(const PopulationStats& stats);

// Equal-width histogram rows (lo, hi, count) covering [0, max].
void write_histogram_csv(std::ostream& out, const std::vector<double>& values,
                         double bin_width);

// ---------------------------------------------------------------------------
// Per-request solution reports.

// Canonicalizes, solves and reports in the original category order.
nlohmann::json solve_report(const Pmf& q, const Pmf& p, double rho,
                            double sigma,
                            InteriorPolicy policy = InteriorPolicy::kExactBudget);

// Per-rate solutions for one store user against the population profile.
nlohmann::json user_report(const UserProfileSet& profiles,
                           std::int64_t user_id,
                           const std::vector<std::pair<double, double>>& rates,
                           InteriorPolicy policy = InteriorPolicy::kExactBudget);

// Eligible ids recorded in the store, or recomputed when absent.
std::vector<std::int64_t> eligible_ids(const UserProfileSet& profiles);

}  // namespace pfs
