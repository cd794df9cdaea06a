#include "pfs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pfs/solver.hpp"

namespace pfs {

namespace {

void check_rates(double rho, double sigma) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw RateOutOfRange("forgery rate must satisfy rho >= 0");
  }
  if (!(sigma >= 0.0) || !(sigma < 1.0)) {
    throw RateOutOfRange("suppression rate must satisfy 0 <= sigma < 1");
  }
}

double forged_excess(const CanonicalView& view, std::span<const double> u) {
  double excess = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    excess += std::max(0.0, u[k] - view.q[k]);
  }
  return excess;
}

double objective_bits(const CanonicalView& view, std::span<const double> u,
                      double scale) {
  double sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    if (u[k] <= 0.0) continue;
    const double t = u[k] / scale;
    sum += t * std::log2(t / view.p[k]);
  }
  return std::max(sum, 0.0);
}

Pmf pmf_from_mass(std::span<const double> u, double scale) {
  std::vector<double> t(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    t[k] = std::max(0.0, u[k]) / scale;
  }
  return Pmf(std::move(t));
}

struct GridBest {
  double risk = std::numeric_limits<double>::infinity();
  std::vector<double> u;

  void offer(double candidate_risk, std::span<const double> candidate_u) {
    if (candidate_risk < risk ||
        (candidate_risk == risk &&
         std::lexicographical_compare(candidate_u.begin(), candidate_u.end(),
                                      u.begin(), u.end()))) {
      risk = candidate_risk;
      u.assign(candidate_u.begin(), candidate_u.end());
    }
  }
};

// Depth-first walk over compositions of `ticks` lattice steps across the
// coordinates, pruning prefixes that already exceed the forgery budget.
class GridWalker {
 public:
  GridWalker(const CanonicalView& view, double rho, double scale,
             std::size_t ticks)
      : view_(view),
        rho_(rho),
        ticks_(ticks),
        step_(scale / static_cast<double>(ticks)),
        point_(view.size(), 0.0),
        term_table_(ticks + 1, 0.0),
        log2_p_(view.size()) {
    for (std::size_t m = 1; m <= ticks; ++m) {
      const double frac =
          static_cast<double>(m) / static_cast<double>(ticks);
      term_table_[m] = frac * std::log2(frac);
    }
    for (std::size_t k = 0; k < view.size(); ++k) {
      log2_p_[k] = std::log2(view.p[k]);
    }
  }

  void run(GridBest& best) { walk(0, ticks_, 0.0, 0.0, best); }

  std::size_t visited() const { return visited_; }

 private:
  void walk(std::size_t k, std::size_t left, double excess, double partial,
            GridBest& best) {
    if (excess > rho_ + kNonNegSlack) return;
    if (k + 1 == point_.size()) {
      const double uk = static_cast<double>(left) * step_;
      if (excess + std::max(0.0, uk - view_.q[k]) > rho_ + kNonNegSlack) {
        return;
      }
      ++visited_;
      const double risk = std::max(partial + term(left, k), 0.0);
      if (risk <= best.risk) {
        point_[k] = uk;
        best.offer(risk, point_);
      }
      return;
    }
    for (std::size_t m = 0; m <= left; ++m) {
      point_[k] = static_cast<double>(m) * step_;
      walk(k + 1, left - m, excess + std::max(0.0, point_[k] - view_.q[k]),
           partial + term(m, k), best);
    }
  }

  // Contribution of coordinate k holding m ticks: with t_k = m/ticks,
  // t_k log2(t_k / p_k) = t_k log2 t_k - t_k log2 p_k.
  double term(std::size_t m, std::size_t k) const {
    if (m == 0) return 0.0;
    const double frac = static_cast<double>(m) / static_cast<double>(ticks_);
    return term_table_[m] - frac * log2_p_[k];
  }

  const CanonicalView& view_;
  double rho_;
  std::size_t ticks_;
  double step_;
  std::vector<double> point_;
  std::vector<double> term_table_;
  std::vector<double> log2_p_;
  std::size_t visited_ = 0;
};

}  // namespace

Strategy reconstruct_strategy(const CanonicalView& view,
                              std::span<const double> u, double rho,
                              double sigma) {
  const std::size_t n = view.size();
  if (u.size() != n) {
    throw InfeasibleU("apparent mass dimension mismatch");
  }
  const double scale = 1.0 + rho - sigma;
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (u[k] < -kNonNegSlack) {
      throw InfeasibleU("apparent mass negative at category " +
                        std::to_string(k));
    }
    total += u[k];
  }
  if (std::abs(total - scale) > kSumTol) {
    throw InfeasibleU("apparent mass sums to " + std::to_string(total) +
                      ", expected 1 + rho - sigma");
  }
  const double excess = forged_excess(view, u);
  if (excess > rho + kSumTol) {
    throw InfeasibleU("apparent mass needs more forgery than the budget");
  }

  const double pad = std::max(0.0, rho - excess);
  Strategy strat{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  for (std::size_t k = 0; k < n; ++k) {
    const double d = u[k] - view.q[k];
    const double alpha = pad * view.p[k];
    strat.r[k] = std::max(0.0, d) + alpha;
    strat.s[k] = std::max(0.0, -d) + alpha;
  }
  return strat;
}

OracleResult oracle_grid(const CanonicalView& view, double rho, double sigma,
                         double resolution) {
  check_rates(rho, sigma);
  if (view.size() > 4) {
    throw DimensionTooLarge("grid oracle supports n <= 4");
  }
  if (!(resolution > 0.0) || resolution > 0.1) {
    throw RateOutOfRange("resolution must lie in (0, 0.1]");
  }

  const double scale = 1.0 + rho - sigma;
  const std::size_t ticks =
      static_cast<std::size_t>(std::llround(std::max(1.0, 1.0 / resolution)));

  GridBest best;
  GridWalker walker(view, rho, scale, ticks);
  walker.run(best);

  // The unperturbed profile is feasible exactly when rho = sigma; seeding it
  // keeps the zero-budget case exact instead of lattice-quantized.
  std::size_t evaluations = walker.visited();
  if (std::abs(scale - 1.0) <= kSumTol) {
    best.offer(objective_bits(view, view.q.mass(), scale), view.q.mass());
    ++evaluations;
  }

  if (best.u.empty()) {
    throw Error("grid oracle found no feasible lattice point");
  }

  OracleResult result{best.risk,
                      best.u,
                      pmf_from_mass(best.u, scale),
                      reconstruct_strategy(view, best.u, rho, sigma),
                      evaluations,
                      0.0,
                      true};
  result.kkt_residual =
      kkt_certificate(view, result.reconstructed, 1e-12).max_violation;
  return result;
}

OracleResult oracle_descent(const CanonicalView& view, double rho,
                            double sigma, std::size_t max_iter, double tol) {
  check_rates(rho, sigma);
  const std::size_t n = view.size();
  const double scale = 1.0 + rho - sigma;

  // Feasible interior start: forgery spread as p, suppression as sigma q.
  Strategy strat{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t k = 0; k < n; ++k) {
    strat.r[k] = rho * view.p[k];
    strat.s[k] = sigma * view.q[k];
  }

  std::vector<double> u(n);
  auto refresh_u = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      u[k] = view.q[k] + strat.r[k] - strat.s[k];
    }
  };
  refresh_u();

  std::vector<double> g(n);
  auto refresh_g = [&] {
    for (std::size_t k = 0; k < n; ++k) {
      g[k] = u[k] > 0.0 ? std::log2(u[k] / (scale * view.p[k]))
                        : -std::numeric_limits<double>::infinity();
    }
  };
  refresh_g();

  double objective = objective_bits(view, u, scale);
  double residual = kkt_certificate(view, strat, tol).max_violation;
  std::size_t iterations = 0;

  // Exact transfer size equalizing u_a/p_a downward and u_b/p_b upward.
  auto equalizing_step = [&](std::size_t a, std::size_t b) {
    return (u[a] * view.p[b] - u[b] * view.p[a]) / (view.p[a] + view.p[b]);
  };

  auto apply_move = [&](std::size_t a, std::size_t b, double delta,
                        bool forgery) {
    // The exact step is optimal for the pair, but clamping plus rounding can
    // still produce a non-improving move; halve until it improves.
    for (int halvings = 0; halvings < 60 && delta > 0.0; ++halvings) {
      Strategy trial = strat;
      if (forgery) {
        trial.r[a] -= delta;
        trial.r[b] += delta;
      } else {
        trial.s[a] -= delta;
        trial.s[b] += delta;
      }
      std::vector<double> trial_u(n);
      for (std::size_t k = 0; k < n; ++k) {
        trial_u[k] = view.q[k] + trial.r[k] - trial.s[k];
      }
      const double trial_obj = objective_bits(view, trial_u, scale);
      if (trial_obj <= objective) {
        strat = std::move(trial);
        u = std::move(trial_u);
        objective = trial_obj;
        return true;
      }
      delta *= 0.5;
    }
    return false;
  };

  while (residual > tol && iterations < max_iter) {
    ++iterations;
    bool moved = false;

    // Forgery exchange: drain the worst-placed forged mass toward the
    // category with the smallest log ratio.
    std::size_t donor = n, receiver = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (strat.r[k] > 0.0 && (donor == n || g[k] > g[donor])) donor = k;
      if (receiver == n || g[k] < g[receiver]) receiver = k;
    }
    if (donor < n && receiver < n && donor != receiver &&
        g[donor] > g[receiver]) {
      const double delta =
          std::min(strat.r[donor], equalizing_step(donor, receiver));
      if (delta > 0.0) moved |= apply_move(donor, receiver, delta, true);
      refresh_g();
    }

    // Suppression exchange: relieve the most over-suppressed category and
    // suppress where the log ratio is largest instead.
    donor = n;
    receiver = n;
    for (std::size_t k = 0; k < n; ++k) {
      if (strat.s[k] > 0.0 && (donor == n || g[k] < g[donor])) donor = k;
      if (u[k] > 0.0 && (receiver == n || g[k] > g[receiver])) receiver = k;
    }
    if (donor < n && receiver < n && donor != receiver &&
        g[receiver] > g[donor]) {
      const double delta =
          std::min(strat.s[donor], equalizing_step(receiver, donor));
      if (delta > 0.0) moved |= apply_move(donor, receiver, delta, false);
      refresh_g();
    }

    residual = kkt_certificate(view, strat, tol).max_violation;
    if (!moved && residual > tol) break;  // numerically stuck
  }

  return OracleResult{objective,
                      u,
                      apparent_profile(view, strat),
                      strat,
                      iterations,
                      residual,
                      residual <= tol};
}

}  // namespace pfs
