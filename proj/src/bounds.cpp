#include "congbox/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "congbox/error.hpp"

namespace congbox {

double eta(double kappa, std::uint64_t K) {
  if (!(kappa > 0.0)) throw DomainError("eta requires kappa > 0");
  if (K < 1) throw DomainError("eta requires K >= 1");
  const double k = static_cast<double>(K);
  return kappa * kappa / (4.0 * (1.0 + 2.0 * kappa) * (k * k + 2.0 * k + 3.0));
}

BoundParams BoundParams::from_system(const SystemSpec& sys, const BoxSpec& box, std::uint64_t p, double kappa) {
  BoundParams out;
  out.kappa = kappa;
  out.n = sys.n;
  out.s = sys.s;
  out.h = box.h;
  out.p = p;
  out.k_min = sys.s ? sys.k_min() : 0;
  out.k_max = sys.s ? sys.k_max() : 0;
  return out;
}

BoundValue chang_bound(double h, double p, double kappa, std::uint64_t k) {
  if (h < std::pow(p, 0.25 + kappa)) return {h, true};
  return {h * std::pow(p, -eta(kappa, k)), false};
}

namespace {

void require_k_above_two(std::uint64_t k) {
  if (k <= 2) throw DomainError("Weyl-sum bound needs degree k > 2, got " + std::to_string(k));
}

}  // namespace

double wooley_bound(double h, double p, std::uint64_t k) {
  require_k_above_two(k);
  const double kd = static_cast<double>(k);
  const double inv = 1.0 / (2.0 * kd * (kd - 2.0));
  return std::pow(h, 1.0 - inv) + std::pow(h, 1.0 - 1.0 / (2.0 * (kd - 2.0))) * std::pow(p, inv);
}

double wooley_short_bound(double h, std::uint64_t k) {
  require_k_above_two(k);
  const double kd = static_cast<double>(k);
  return std::pow(h, 1.0 - 1.0 / (2.0 * kd * (kd - 2.0)));
}

bool wooley_short_in_range(double h, double p, std::uint64_t k) {
  require_k_above_two(k);
  return std::pow(p, 1.0 / (static_cast<double>(k) - 1.0)) <= h && h < p;
}

double acz_bound(double h, double p, double slack_eps, double slack_c) {
  return h * h * h * h / p + slack_c * h * h * std::pow(p, slack_eps);
}

BoundValue theorem_error_bound(double h, double p, unsigned n, double kappa, std::uint64_t k_min,
                               std::uint64_t k_max) {
  if (n < 3) throw DomainError("error bound needs n >= 3");
  const double e = eta(kappa, k_max);
  const double nd = static_cast<double>(n);
  const double value = std::pow(h, nd) * std::pow(p, -1.0 - e * (nd - 4.0)) +
                       std::pow(h, nd - 2.0) * std::pow(p, -e * (nd - 4.0));
  // p^{1/(k-1)} is unbounded for k <= 1, so only the first threshold applies there.
  double threshold = std::pow(p, 0.25 + kappa);
  if (k_min >= 2) threshold = std::min(threshold, std::pow(p, 1.0 / (static_cast<double>(k_min) - 1.0)));
  return {value, !(h >= threshold && h < p)};
}

BoundValue theorem_error_bound(const BoundParams& params) {
  return theorem_error_bound(static_cast<double>(params.h), static_cast<double>(params.p), params.n, params.kappa,
                             params.k_min, params.k_max);
}

double density_threshold(unsigned s, double eta_value) { return (s + 0.5) / eta_value + 4.0; }

double weil_bound(double p) { return std::sqrt(p) * std::log(p); }

}  // namespace congbox
