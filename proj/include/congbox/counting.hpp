#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "congbox/field.hpp"
#include "congbox/sums.hpp"

namespace congbox {

/// The factor G_i(x_i) that variable i contributes to the product congruence
/// G_1(x_1) ... G_n(x_n) = a. Identity gives the plain product x_1 ... x_n.
struct ProductFactor {
  enum class Kind { Identity, Power, Polynomial };

  Kind kind = Kind::Identity;
  std::uint64_t m = 1;  // exponent for Kind::Power
  PolyMod poly;         // for Kind::Polynomial

  static ProductFactor identity() { return {}; }
  static ProductFactor power(std::uint64_t m) { return {Kind::Power, m, {}}; }
  static ProductFactor polynomial(PolyMod g) { return {Kind::Polynomial, 1, std::move(g)}; }

  Residue eval(Residue x, Residue p) const;
  std::string describe() const;
};

/// One product congruence and s diagonal congruences
///
///   G_1(x_1) ... G_n(x_n) = a                      (mod p)
///   sum_i c[i][j] x_i^k[i][j] = b[j],  j < s       (mod p)
///
/// Residues are expected reduced mod p.
struct SystemSpec {
  unsigned n = 3;
  unsigned s = 0;
  Residue a = 1;
  std::vector<Residue> b;                   // length s
  std::vector<std::vector<Residue>> c;      // n rows of length s
  std::vector<std::vector<std::uint64_t>> k;  // n rows of length s, entries >= 1
  std::vector<ProductFactor> product_form;  // empty, or one per variable
  /// Enforce 3 <= k[i][0] < ... < k[i][s-1] instead of merely warning.
  bool paper_regime = false;

  const ProductFactor& factor(unsigned i) const;
  std::uint64_t k_min() const;
  std::uint64_t k_max() const;
};

/// The cube [u_1+1, u_1+h] x ... x [u_n+1, u_n+h].
struct BoxSpec {
  std::vector<std::uint64_t> u;
  std::uint64_t h = 1;

  static BoxSpec full(unsigned n, Residue p) { return {std::vector<std::uint64_t>(n, 0), p - 1ULL}; }
};

/// Checks every SystemSpec invariant and returns the warnings for inputs
/// outside the regime the asymptotic results speak about. Throws InvalidInput.
std::vector<std::string> validate_system(const FieldCtx& ctx, const SystemSpec& sys);

/// Throws InvalidInput unless the box has n starts, h >= 1 and u_i + h < p.
void validate_box(const FieldCtx& ctx, const BoxSpec& box, unsigned n);

struct CountResult {
  std::uint64_t count = 0;
  /// Contribution of the principal character with lambda = 0. Equals
  /// h^n/((p-1) p^s) whenever no G_i vanishes on the box.
  double main_term = 0.0;
  cplx r1{};  // non-principal characters, all lambda
  cplx r2{};  // principal character, lambda != 0
  /// |main + r1 + r2 - count| before rounding.
  double residual = 0.0;
  /// First-order a priori bound on the floating-point error of the total.
  double error_bound = 0.0;
  bool compensated = false;
  std::vector<std::string> warnings;
};

struct CountOptions {
  std::uint64_t brute_cap = 1'000'000'000;  // h^n evaluations
  double cost_cap = 1e10;                   // p^s (p-1) n h term operations
  bool force = false;                       // ignore both caps
  BatchMethod batch = BatchMethod::Direct;
  unsigned workers = 1;
  /// Start directly with compensated accumulation instead of using it as a retry.
  bool compensated = false;
};

/// Exact count by enumeration over the box, pruning on the partial product
/// and checking the diagonal congruences from incrementally built sums.
/// Throws SizeGuard when h^n exceeds opts.brute_cap and opts.force is unset.
std::uint64_t count_bruteforce(const FieldCtx& ctx, const SystemSpec& sys, const BoxSpec& box,
                               const CountOptions& opts = {});

/// Exact count through orthogonality of additive and multiplicative characters:
///
///   N = 1/((p-1) p^s) sum_lambda e_p(-<lambda, b>) sum_t chi_t(a^{-1}) prod_i T_i(t; lambda),
///   T_i(t; lambda) = sum_{x in [u_i+1, u_i+h]} chi_t(G_i(x)) e_p(sum_j lambda_j c_ij x^k_ij).
///
/// For each lambda (row-major over [0,p-1]^s) the values T_i(., lambda) for all
/// characters come from one character_transform call per variable. The sum is
/// rounded to the nearest integer only if the residual is below
/// 1e-6 max(1, count) and the error bound is below 1/2; otherwise the sum is
/// recomputed once with compensated accumulation, and PrecisionLoss is thrown
/// if it still fails. Throws CostGuard when the estimated cost exceeds opts.cost_cap.
CountResult count_spectral(const FieldCtx& ctx, const SystemSpec& sys, const BoxSpec& box,
                           const CountOptions& opts = {});

/// The s = 0 specialization: number of box points with prod_i G_i(x_i) = a.
/// An empty product_form means G_i(X) = X for all i.
std::uint64_t count_product_only(const FieldCtx& ctx, Residue a, const BoxSpec& box,
                                 const std::vector<ProductFactor>& product_form = {},
                                 const CountOptions& opts = {});

struct Density {
  double theorem_main = 0.0;   // h^n / p^{s+1}
  double separated_main = 0.0; // h^n / ((p-1) p^s)
};

Density predicted_density(const SystemSpec& sys, const BoxSpec& box, Residue p);

}  // namespace congbox
