#include "congbox/sums.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "congbox/accumulate.hpp"
#include "congbox/error.hpp"

namespace congbox {

PolyMod PolyMod::from_integers(std::span<const std::int64_t> c, Residue p) {
  PolyMod f;
  f.coeffs.clear();
  const auto m = static_cast<std::int64_t>(p);
  for (std::int64_t v : c) {
    std::int64_t r = v % m;
    if (r < 0) r += m;
    f.coeffs.push_back(static_cast<Residue>(r));
  }
  if (f.coeffs.empty()) f.coeffs.push_back(0);
  return f;
}

PolyMod PolyMod::monomial(Residue coeff, unsigned degree) {
  PolyMod f;
  f.coeffs.assign(degree + 1, 0);
  f.coeffs[degree] = coeff;
  return f;
}

int PolyMod::degree() const noexcept {
  for (std::size_t d = coeffs.size(); d-- > 0;) {
    if (coeffs[d] != 0) return static_cast<int>(d);
  }
  return -1;
}

Residue PolyMod::eval(Residue x, Residue p) const noexcept {
  std::uint64_t acc = 0;
  for (std::size_t d = coeffs.size(); d-- > 0;) acc = (acc * x + coeffs[d]) % p;
  return static_cast<Residue>(acc);
}

void validate_poly(const FieldCtx& ctx, const PolyMod& f) {
  if (f.coeffs.empty()) throw InvalidInput("polynomial has no coefficients");
  for (Residue c : f.coeffs) {
    if (c >= ctx.p()) throw InvalidInput("polynomial coefficient " + std::to_string(c) + " not reduced mod p");
  }
}

void validate_interval(const FieldCtx& ctx, std::uint64_t u, std::uint64_t h) {
  if (h < 1 || u + h > ctx.p() - 1ULL) {
    throw IntervalOutOfRange("interval [u+1, u+h] with u=" + std::to_string(u) + ", h=" + std::to_string(h) +
                             " must satisfy h >= 1 and u+h <= p-1 = " + std::to_string(ctx.p() - 1));
  }
}

void IntervalWeights::validate(const FieldCtx& ctx) const {
  validate_interval(ctx, u, h);
  if (w.size() != h) throw InvalidInput("weight vector length differs from h");
  for (const auto& v : w) {
    if (!(std::abs(v) <= 1.0 + 1e-12)) throw InvalidInput("weight with |rho(x)| > 1");
  }
}

namespace {

template <class Term>
cplx accumulate_terms(std::uint64_t h, Term term) {
  if (h > kCompensationThreshold) {
    CompensatedSum<cplx> acc;
    for (std::uint64_t k = 0; k < h; ++k) acc.add(term(k));
    return acc.value();
  }
  cplx acc{};
  for (std::uint64_t k = 0; k < h; ++k) acc += term(k);
  return acc;
}

}  // namespace

cplx exp_sum(const FieldCtx& ctx, const PolyMod& f, std::uint64_t u, std::uint64_t h) {
  validate_interval(ctx, u, h);
  validate_poly(ctx, f);
  const Residue p = ctx.p();
  return accumulate_terms(h, [&](std::uint64_t k) {
    return ctx.add_root(f.eval(static_cast<Residue>(u + 1 + k), p));
  });
}

cplx mixed_char_sum(const FieldCtx& ctx, std::uint64_t t, const PolyMod& g, const PolyMod& f,
                    std::uint64_t u, std::uint64_t h) {
  validate_interval(ctx, u, h);
  validate_poly(ctx, g);
  validate_poly(ctx, f);
  if (t >= ctx.order()) throw IndexOutOfRange("character index " + std::to_string(t) + " out of range");
  const Residue p = ctx.p();
  return accumulate_terms(h, [&](std::uint64_t k) {
    const auto x = static_cast<Residue>(u + 1 + k);
    const Residue y = g.eval(x, p);
    if (y == 0) return cplx{};
    return mult_char(ctx, t, y) * ctx.add_root(f.eval(x, p));
  });
}

std::vector<cplx> character_transform(const FieldCtx& ctx, std::span<const Residue> points,
                                      std::span<const cplx> weights, const BatchOptions& opts) {
  if (points.size() != weights.size()) throw InvalidInput("points and weights differ in length");
  const std::size_t order = ctx.order();

  if (opts.method == BatchMethod::Dft) {
    std::vector<cplx> scattered(order, cplx{});
    for (std::size_t k = 0; k < points.size(); ++k) {
      const Residue y = points[k] % ctx.p();
      if (y != 0) scattered[ctx.ind(y)] += weights[k];
    }
    std::optional<CyclicDft> local;
    const CyclicDft* plan = opts.plan;
    if (plan == nullptr || plan->size() != order) plan = &local.emplace(order);
    return (*plan)(scattered);
  }

  // Direct: for each point walk t*ind(y) mod (p-1) incrementally.
  const auto roots = ctx.mult_roots();
  const bool compensated = points.size() > kCompensationThreshold;
  std::vector<cplx> out(order, cplx{});
  std::vector<CompensatedSum<cplx>> comp(compensated ? order : 0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const Residue y = points[k] % ctx.p();
    if (y == 0) continue;
    const cplx w = weights[k];
    const std::size_t step = ctx.ind(y);
    std::size_t idx = 0;
    if (compensated) {
      for (std::size_t t = 0; t < order; ++t) {
        comp[t].add(w * roots[idx]);
        idx += step;
        if (idx >= order) idx -= order;
      }
    } else {
      for (std::size_t t = 0; t < order; ++t) {
        out[t] += w * roots[idx];
        idx += step;
        if (idx >= order) idx -= order;
      }
    }
  }
  if (compensated) {
    for (std::size_t t = 0; t < order; ++t) out[t] = comp[t].value();
  }
  return out;
}

std::vector<cplx> batch_char_sums(const FieldCtx& ctx, const IntervalWeights& wts, const BatchOptions& opts) {
  wts.validate(ctx);
  std::vector<Residue> points(wts.h);
  for (std::uint64_t k = 0; k < wts.h; ++k) points[k] = static_cast<Residue>(wts.u + 1 + k);
  return character_transform(ctx, points, wts.w, opts);
}

double fourth_moment(const FieldCtx& ctx, const IntervalWeights& wts, const BatchOptions& opts) {
  const auto sums = batch_char_sums(ctx, wts, opts);
  double total = 0.0;
  for (const auto& s : sums) {
    const double m2 = std::norm(s);
    total += m2 * m2;
  }
  return total;
}

namespace {

constexpr std::uint64_t kDenseBucketLimit = std::uint64_t{1} << 24;

void check_quadruple_cap(std::uint64_t h, std::uint64_t cap) {
  if (h * h > cap) {
    throw SizeGuard("h^2 = " + std::to_string(h * h) + " exceeds the quadruple-count cap " + std::to_string(cap));
  }
}

// Calls visit(product, x1_index, x2_index) for every ordered pair.
template <class Visit>
void for_each_pair_product(Residue p, std::uint64_t u, std::uint64_t h, Visit visit) {
  for (std::uint64_t i = 0; i < h; ++i) {
    const std::uint64_t x1 = u + 1 + i;
    for (std::uint64_t j = 0; j < h; ++j) {
      visit(static_cast<Residue>(x1 * (u + 1 + j) % p), i, j);
    }
  }
}

}  // namespace

std::uint64_t acz_quadruple_count(const FieldCtx& ctx, std::uint64_t u, std::uint64_t h, std::uint64_t cap) {
  validate_interval(ctx, u, h);
  check_quadruple_cap(h, cap);
  std::uint64_t total = 0;
  if (ctx.p() <= kDenseBucketLimit) {
    std::vector<std::uint64_t> buckets(ctx.p(), 0);
    for_each_pair_product(ctx.p(), u, h, [&](Residue y, auto, auto) { ++buckets[y]; });
    for (auto m : buckets) total += m * m;
  } else {
    std::unordered_map<Residue, std::uint64_t> buckets;
    buckets.reserve(h * h);
    for_each_pair_product(ctx.p(), u, h, [&](Residue y, auto, auto) { ++buckets[y]; });
    for (const auto& [y, m] : buckets) total += m * m;
  }
  return total;
}

double weighted_quadruple_sum(const FieldCtx& ctx, const IntervalWeights& wts, std::uint64_t cap) {
  wts.validate(ctx);
  check_quadruple_cap(wts.h, cap);
  std::unordered_map<Residue, cplx> buckets;
  buckets.reserve(wts.h * wts.h);
  for_each_pair_product(ctx.p(), wts.u, wts.h,
                        [&](Residue y, std::uint64_t i, std::uint64_t j) { buckets[y] += wts.w[i] * wts.w[j]; });
  // Summing in residue order keeps the result independent of hash iteration order.
  std::vector<std::pair<Residue, double>> ordered;
  ordered.reserve(buckets.size());
  for (const auto& [y, a] : buckets) ordered.emplace_back(y, std::norm(a));
  std::sort(ordered.begin(), ordered.end());
  double total = 0.0;
  for (const auto& [y, v] : ordered) total += v;
  return total;
}

}  // namespace congbox
