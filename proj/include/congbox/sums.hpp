#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "congbox/dft.hpp"
#include "congbox/field.hpp"

namespace congbox {

/// Polynomial with coefficients reduced mod p; coeffs[d] multiplies X^d.
struct PolyMod {
  std::vector<Residue> coeffs{0};

  /// Reduces arbitrary integer coefficients into [0, p-1].
  static PolyMod from_integers(std::span<const std::int64_t> c, Residue p);
  static PolyMod monomial(Residue coeff, unsigned degree);
  /// X, the identity polynomial.
  static PolyMod identity() { return PolyMod{{0, 1}}; }

  /// Highest index with a nonzero coefficient; -1 for the zero polynomial.
  int degree() const noexcept;
  /// Horner evaluation mod p.
  Residue eval(Residue x, Residue p) const noexcept;
};

/// Throws InvalidInput unless coeffs is non-empty and every entry is < p.
void validate_poly(const FieldCtx& ctx, const PolyMod& f);

/// Throws IntervalOutOfRange unless 1 <= h, u + h <= p - 1.
void validate_interval(const FieldCtx& ctx, std::uint64_t u, std::uint64_t h);

/// Complex weights rho(u+1), ..., rho(u+h) on an interval of units.
struct IntervalWeights {
  std::uint64_t u = 0;
  std::uint64_t h = 1;
  std::vector<cplx> w;

  static IntervalWeights ones(std::uint64_t u, std::uint64_t h) {
    return {u, h, std::vector<cplx>(h, cplx{1.0, 0.0})};
  }
  /// Throws IntervalOutOfRange / InvalidInput unless the interval is valid,
  /// w.size() == h and every |w[x]| <= 1.
  void validate(const FieldCtx& ctx) const;
};

/// Above this many terms, sums use compensated accumulation.
inline constexpr std::uint64_t kCompensationThreshold = 100000;

/// sum_{x=u+1}^{u+h} e_p(F(x)).
cplx exp_sum(const FieldCtx& ctx, const PolyMod& f, std::uint64_t u, std::uint64_t h);

/// sum_{x=u+1}^{u+h} chi_t(G(x)) e_p(F(x)); terms with G(x) = 0 contribute 0.
cplx mixed_char_sum(const FieldCtx& ctx, std::uint64_t t, const PolyMod& g, const PolyMod& f,
                    std::uint64_t u, std::uint64_t h);

enum class BatchMethod { Direct, Dft };

struct BatchOptions {
  BatchMethod method = BatchMethod::Direct;
  /// Plan of length p-1 for the Dft method; built on the fly when null.
  const CyclicDft* plan = nullptr;
};

/// For every character index t in [0, p-2], the weighted sum
/// sum_k w[k] * chi_t(points[k]). Points equal to 0 mod p are skipped.
/// Direct evaluation accumulates in ascending k; the Dft method scatters the
/// weights onto discrete-log positions and applies one length-(p-1) transform.
std::vector<cplx> character_transform(const FieldCtx& ctx, std::span<const Residue> points,
                                      std::span<const cplx> weights, const BatchOptions& opts = {});

/// Entry t is sum_{x=u+1}^{u+h} w[x] chi_t(x).
std::vector<cplx> batch_char_sums(const FieldCtx& ctx, const IntervalWeights& wts,
                                  const BatchOptions& opts = {});

/// sum_t |sum_x w[x] chi_t(x)|^4.
double fourth_moment(const FieldCtx& ctx, const IntervalWeights& wts, const BatchOptions& opts = {});

/// Default cap on h^2 for the quadruple counters.
inline constexpr std::uint64_t kDefaultQuadrupleCap = 400'000'000;

/// Number of ordered (x1, x2, x3, x4) in [u+1, u+h]^4 with x1 x2 = x3 x4 mod p.
/// Exact integer arithmetic, O(h^2): ordered pairs are bucketed by product and
/// the squared bucket sizes are summed. Throws SizeGuard when h^2 > cap.
std::uint64_t acz_quadruple_count(const FieldCtx& ctx, std::uint64_t u, std::uint64_t h,
                                  std::uint64_t cap = kDefaultQuadrupleCap);

/// sum over x1 x2 = x3 x4 of w1 w2 conj(w3 w4), by the same bucketing; the
/// fourth moment equals (p-1) times this value.
double weighted_quadruple_sum(const FieldCtx& ctx, const IntervalWeights& wts,
                              std::uint64_t cap = kDefaultQuadrupleCap);

}  // namespace congbox
