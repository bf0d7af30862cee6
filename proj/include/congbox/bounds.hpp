#pragma once

#include <cstdint>

#include "congbox/counting.hpp"

namespace congbox {

// Computable shapes of the bounds used for the box-count asymptotics. Every
// function takes the implied constant to be 1; sweeps estimate the real
// constant as the largest observed ratio.

/// A bound value, flagged when the inputs lie outside the range where the
/// bound is claimed to hold.
struct BoundValue {
  double value = 0.0;
  bool flagged = false;
};

/// kappa^2 / (4 (1 + 2 kappa) (K^2 + 2K + 3)). Throws DomainError unless kappa > 0, K >= 1.
double eta(double kappa, std::uint64_t K);

/// Parameters for the bound formulas. k_min and k_max are always recomputed
/// from a system, never taken from input.
struct BoundParams {
  double kappa = 0.25;
  std::uint64_t k_min = 3;
  std::uint64_t k_max = 3;
  unsigned n = 3;
  unsigned s = 1;
  std::uint64_t h = 1;
  std::uint64_t p = 3;

  static BoundParams from_system(const SystemSpec& sys, const BoxSpec& box, std::uint64_t p, double kappa);
};

/// Mixed character sums with a non-principal character and a degree-k phase:
/// h p^{-eta(kappa, k)} when h >= p^{1/4 + kappa}; otherwise the trivial bound h, flagged.
BoundValue chang_bound(double h, double p, double kappa, std::uint64_t k);

/// h^{1 - 1/(2k(k-2))} + h^{1 - 1/(2(k-2))} p^{1/(2k(k-2))}. Throws DomainError for k <= 2.
double wooley_bound(double h, double p, std::uint64_t k);

/// h^{1 - 1/(2k(k-2))}, claimed for p^{1/(k-1)} <= h < p. Throws DomainError for k <= 2.
double wooley_short_bound(double h, std::uint64_t k);
bool wooley_short_in_range(double h, double p, std::uint64_t k);

/// h^4/p + slack_c h^2 p^{slack_eps}; the p^{o(1)} factor made explicit.
double acz_bound(double h, double p, double slack_eps = 0.1, double slack_c = 1.0);

/// h^n p^{-1-eta(n-4)} + h^{n-2} p^{-eta(n-4)} with eta = eta(kappa, k_max).
/// Flagged unless min(p^{1/4+kappa}, p^{1/(k_min-1)}) <= h < p. Throws DomainError for n < 3.
BoundValue theorem_error_bound(double h, double p, unsigned n, double kappa, std::uint64_t k_min,
                               std::uint64_t k_max);
BoundValue theorem_error_bound(const BoundParams& params);

/// Smallest n for which the error term is o(main term): (s + 1/2)/eta + 4.
double density_threshold(unsigned s, double eta_value);

/// p^{1/2} log p, the complete-sum shape for sum chi(G(x)) e_p(F(x)).
double weil_bound(double p);

}  // namespace congbox
