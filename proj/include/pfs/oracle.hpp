#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfs/profile.hpp"

namespace pfs {

// Independent numerical minimizers for the privacy objective, used to
// validate the closed form. The feasible set is expressed through the
// unnormalized apparent mass u = q + r - s, which satisfies u >= 0,
// sum(u) = 1 + rho - sigma and sum((u - q)_+) <= rho.
struct OracleResult {
  double risk;  // bits
  std::vector<double> u;
  Pmf t;
  Strategy reconstructed;
  std::size_t evaluations;  // lattice points visited, or descent iterations
  double kkt_residual;
  bool converged;  // descent only; grid results always report true
};

// Exhaustive minimizer over a simplex lattice with the given spacing,
// restricted to n <= 4. The returned risk is an upper bound on the true
// minimum, accurate to O(resolution) per coordinate.
// Throws DimensionTooLarge and RateOutOfRange.
OracleResult oracle_grid(const CanonicalView& view, double rho, double sigma,
                         double resolution);

// Feasible-direction descent over (r, s): mass moves from the active donor
// with the largest log-ratio g_k = log2(t_k / p_k) to the feasible receiver
// with the smallest, with step halving when a tentative move fails to
// decrease the objective. Stops once the certificate residual reaches tol;
// when max_iter runs out first, the best iterate is returned with
// converged = false.
OracleResult oracle_descent(const CanonicalView& view, double rho,
                            double sigma, std::size_t max_iter, double tol);

// Inverts the u-reformulation: r = (u - q)_+ + alpha, s = (q - u)_+ + alpha
// with the leftover budget rho - sum((u - q)_+) padded proportionally to p.
// Throws InfeasibleU.
Strategy reconstruct_strategy(const CanonicalView& view,
                              std::span<const double> u, double rho,
                              double sigma);

}  // namespace pfs
