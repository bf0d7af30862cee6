#include "congbox/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "congbox/accumulate.hpp"
#include "congbox/error.hpp"
#include "congbox/parallel.hpp"

namespace congbox {

Residue ProductFactor::eval(Residue x, Residue p) const {
  switch (kind) {
    case Kind::Identity:
      return x % p;
    case Kind::Power:
      return mod_pow(x % p, m, p);
    case Kind::Polynomial:
      return poly.eval(x % p, p);
  }
  return 0;
}

std::string ProductFactor::describe() const {
  switch (kind) {
    case Kind::Identity:
      return "X";
    case Kind::Power:
      return "X^" + std::to_string(m);
    case Kind::Polynomial: {
      std::string out;
      for (std::size_t d = 0; d < poly.coeffs.size(); ++d) {
        if (d) out += ",";
        out += std::to_string(poly.coeffs[d]);
      }
      return "poly(" + out + ")";
    }
  }
  return "?";
}

const ProductFactor& SystemSpec::factor(unsigned i) const {
  static const ProductFactor kIdentity = ProductFactor::identity();
  return product_form.empty() ? kIdentity : product_form[i];
}

std::uint64_t SystemSpec::k_min() const {
  std::uint64_t out = std::numeric_limits<std::uint64_t>::max();
  for (const auto& row : k) {
    for (auto v : row) out = std::min(out, v);
  }
  return out;
}

std::uint64_t SystemSpec::k_max() const {
  std::uint64_t out = 0;
  for (const auto& row : k) {
    for (auto v : row) out = std::max(out, v);
  }
  return out;
}

std::vector<std::string> validate_system(const FieldCtx& ctx, const SystemSpec& sys) {
  const Residue p = ctx.p();
  std::vector<std::string> warnings;
  if (sys.n < 2) throw InvalidInput("n must be at least 2");
  if (sys.a == 0 || sys.a >= p) throw InvalidInput("gcd(a, p) = 1 violated: a must be a unit in [1, p-1]");
  if (sys.b.size() != sys.s) throw InvalidInput("b must have s entries");
  for (auto v : sys.b) {
    if (v >= p) throw InvalidInput("b_j not reduced mod p");
  }
  // With s = 0, c and k may be left empty.
  const bool no_rows = sys.s == 0 && sys.c.empty() && sys.k.empty();
  if (!no_rows && (sys.c.size() != sys.n || sys.k.size() != sys.n)) throw InvalidInput("c and k must have n rows");

  bool regime_ok = true;
  for (unsigned i = 0; i < sys.n && !no_rows; ++i) {
    if (sys.c[i].size() != sys.s || sys.k[i].size() != sys.s) throw InvalidInput("c and k rows must have s entries");
    for (unsigned j = 0; j < sys.s; ++j) {
      if (sys.c[i][j] == 0 || sys.c[i][j] >= p) {
        throw InvalidInput("gcd(c_ij, p) = 1 violated at i=" + std::to_string(i + 1) + ", j=" + std::to_string(j + 1));
      }
      if (sys.k[i][j] < 1) throw InvalidInput("exponents k_ij must be >= 1");
      if (sys.k[i][j] < 3 || (j > 0 && sys.k[i][j] <= sys.k[i][j - 1])) regime_ok = false;
    }
  }
  if (!regime_ok) {
    if (sys.paper_regime) throw InvalidInput("exponents must satisfy 3 <= k_i1 < ... < k_is for every i");
    warnings.emplace_back("exponents outside 3 <= k_i1 < ... < k_is");
  }

  if (!sys.product_form.empty()) {
    if (sys.product_form.size() != sys.n) throw InvalidInput("product form must have n entries");
    for (const auto& f : sys.product_form) {
      if (f.kind == ProductFactor::Kind::Power) {
        if (f.m < 1) throw InvalidInput("power exponent m_i must be >= 1");
        if (std::gcd(f.m, static_cast<std::uint64_t>(p - 1)) != 1) {
          throw InvalidInput("gcd(m_i, p-1) = 1 violated for m_i = " + std::to_string(f.m));
        }
      } else if (f.kind == ProductFactor::Kind::Polynomial) {
        validate_poly(ctx, f.poly);
        if (f.poly.degree() < 1) throw InvalidInput("product-form polynomial must be nonconstant");
      }
    }
  }

  if (sys.s == 0) warnings.emplace_back("s = 0: only the product congruence (the asymptotic results assume s >= 1)");
  if (sys.n < 3) warnings.emplace_back("n = 2: below the n >= 3 regime");
  return warnings;
}

void validate_box(const FieldCtx& ctx, const BoxSpec& box, unsigned n) {
  if (box.u.size() != n) throw InvalidInput("box must have n interval starts");
  if (box.h < 1) throw InvalidInput("box side h must be >= 1");
  for (auto u : box.u) {
    if (u + box.h >= ctx.p()) {
      throw InvalidInput("box violates u_i + h < p (u_i=" + std::to_string(u) + ", h=" + std::to_string(box.h) + ")");
    }
  }
}

namespace {

// Per-variable precomputation shared by both counters: G_i(x) and the
// diagonal monomials c_ij x^k_ij, for every x of the variable's interval.
struct VariableTables {
  std::vector<Residue> g;     // h entries
  std::vector<Residue> diag;  // h * s entries, x-major
};

std::vector<VariableTables> build_tables(const FieldCtx& ctx, const SystemSpec& sys, const BoxSpec& box) {
  const Residue p = ctx.p();
  std::vector<VariableTables> out(sys.n);
  for (unsigned i = 0; i < sys.n; ++i) {
    auto& vt = out[i];
    vt.g.resize(box.h);
    vt.diag.resize(box.h * sys.s);
    for (std::uint64_t k = 0; k < box.h; ++k) {
      const auto x = static_cast<Residue>(box.u[i] + 1 + k);
      vt.g[k] = sys.factor(i).eval(x, p);
      for (unsigned j = 0; j < sys.s; ++j) {
        // x is a unit, so the exponent may be reduced mod p-1.
        const Residue xk = mod_pow(x, sys.k[i][j] % (p - 1), p);
        vt.diag[k * sys.s + j] = static_cast<Residue>(std::uint64_t{xk} * sys.c[i][j] % p);
      }
    }
  }
  return out;
}

double pow_u(double base, unsigned e) {
  double r = 1.0;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

std::uint64_t count_bruteforce(const FieldCtx& ctx, const SystemSpec& sys, const BoxSpec& box,
                               const CountOptions& opts) {
  validate_system(ctx, sys);
  validate_box(ctx, box, sys.n);
  const double evaluations = pow_u(static_cast<double>(box.h), sys.n);
  if (!opts.force && evaluations > static_cast<double>(opts.brute_cap)) {
    throw SizeGuard("brute force needs h^n = " + std::to_string(evaluations) + " evaluations, cap is " +
                    std::to_string(opts.brute_cap));
  }

  const Residue p = ctx.p();
  const unsigned n = sys.n;
  const unsigned s = sys.s;
  const auto tables = build_tables(ctx, sys, box);
  const std::uint64_t h = box.h;

  // Count completions of a prefix fixed up to (but excluding) `depth`.
  auto count_from = [&](std::uint64_t first_index) {
    std::vector<std::uint64_t> sums((n + 1) * s, 0);  // sums[d*s + j]: diagonal partial sums of x_0..x_{d-1}
    std::uint64_t found = 0;
    auto recurse = [&](auto&& self, unsigned depth, std::uint64_t prod) -> void {
      const auto& vt = tables[depth];
      const std::uint64_t* prefix = sums.data() + depth * s;
      if (depth + 1 == n) {
        const std::uint64_t target = std::uint64_t{sys.a} * mod_inverse(static_cast<Residue>(prod), p) % p;
        for (std::uint64_t x = 0; x < h; ++x) {
          if (vt.g[x] != target) continue;
          bool ok = true;
          for (unsigned j = 0; j < s && ok; ++j) ok = (prefix[j] + vt.diag[x * s + j]) % p == sys.b[j];
          found += ok;
        }
        return;
      }
      const std::uint64_t lo = depth == 0 ? first_index : 0;
      const std::uint64_t hi = depth == 0 ? first_index + 1 : h;
      for (std::uint64_t x = lo; x < hi; ++x) {
        const std::uint64_t next = prod * vt.g[x] % p;
        if (next == 0) continue;  // some G_i vanished; the product can never reach a unit
        std::uint64_t* out = sums.data() + (depth + 1) * s;
        for (unsigned j = 0; j < s; ++j) out[j] = (prefix[j] + vt.diag[x * s + j]) % p;
        self(self, depth + 1, next);
      }
    };
    recurse(recurse, 0, 1);
    return found;
  };

  std::vector<std::uint64_t> per_first(h, 0);
  parallel_for(h, opts.workers, [&](std::size_t x) { per_first[x] = count_from(x); });
  return std::accumulate(per_first.begin(), per_first.end(), std::uint64_t{0});
}

namespace {

using cld = std::complex<long double>;

struct ChunkPartial {
  cld r1{};
  cld r2{};
  long double magnitude = 0;  // sum of |term| over accumulated terms
  long double term_error = 0; // first-order error from the per-variable sums
};

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Runs one pass of the orthogonality sum. `compensated` switches the character
// and lambda accumulations to compensated long-double sums.
CountResult spectral_pass(const FieldCtx& ctx, const SystemSpec& sys, const BoxSpec& box,
                          const std::vector<VariableTables>& tables, const CountOptions& opts, bool compensated) {
  const Residue p = ctx.p();
  const std::size_t order = ctx.order();
  const unsigned n = sys.n;
  const unsigned s = sys.s;
  const std::uint64_t h = box.h;

  std::uint64_t lambda_count = 1;
  for (unsigned j = 0; j < s; ++j) lambda_count *= p;
  const std::uint64_t chunk = std::max<std::uint64_t>(16, (lambda_count + 65535) / 65536);
  const std::uint64_t chunks = (lambda_count + chunk - 1) / chunk;

  std::optional<CyclicDft> plan;
  if (opts.batch == BatchMethod::Dft) plan.emplace(order);
  const BatchOptions batch{opts.batch, plan ? &*plan : nullptr};

  // Absolute error of one computed T_i(t; lambda): a sum of h unit-modulus terms.
  const double log_m = std::log2(4.0 * static_cast<double>(order));
  const double delta = opts.batch == BatchMethod::Dft ? kEps * static_cast<double>(h) * (10.0 * log_m + 4.0)
                                                      : kEps * static_cast<double>(h) * (static_cast<double>(h) + 4.0);

  const Residue ind_a_inv = ctx.ind(mod_inverse(sys.a, p));
  std::vector<cplx> chi_a_inv(order);
  for (std::size_t t = 0, idx = 0; t < order; ++t) {
    chi_a_inv[t] = ctx.mult_root(static_cast<Residue>(idx));
    idx += ind_a_inv;
    if (idx >= order) idx -= order;
  }

  std::vector<ChunkPartial> partials(chunks);
  parallel_for(chunks, opts.workers, [&](std::size_t c) {
    ChunkPartial part;
    CompensatedSum<cld> r1_acc, r2_acc;
    std::vector<std::vector<cplx>> sums(n);
    std::vector<cplx> weights(h);
    std::vector<std::uint64_t> lambda(s);
    std::vector<double> abs_t(n), prefix(n + 1), suffix(n + 1);

    const std::uint64_t begin = c * chunk;
    const std::uint64_t end = std::min(lambda_count, begin + chunk);
    for (std::uint64_t li = begin; li < end; ++li) {
      // Row-major digits: lambda[s-1] varies fastest.
      std::uint64_t rest = li;
      for (unsigned j = s; j-- > 0;) {
        lambda[j] = rest % p;
        rest /= p;
      }
      const bool lambda_zero = li == 0;

      for (unsigned i = 0; i < n; ++i) {
        const auto& vt = tables[i];
        for (std::uint64_t x = 0; x < h; ++x) {
          std::uint64_t phase = 0;
          for (unsigned j = 0; j < s; ++j) phase = (phase + lambda[j] * vt.diag[x * s + j]) % p;
          weights[x] = ctx.add_root(static_cast<Residue>(phase));
        }
        sums[i] = character_transform(ctx, vt.g, weights, batch);
      }

      std::uint64_t twist_phase = 0;
      for (unsigned j = 0; j < s; ++j) twist_phase = (twist_phase + lambda[j] * sys.b[j]) % p;
      const cplx twist = ctx.add_root(static_cast<Residue>((p - twist_phase) % p));

      cplx nonprincipal{};
      CompensatedSum<cld> nonprincipal_acc;
      cplx principal{};
      for (std::size_t t = 0; t < order; ++t) {
        if (t == 0 && lambda_zero) continue;  // the main term, added exactly
        cplx term = chi_a_inv[t];
        prefix[0] = 1.0;
        for (unsigned i = 0; i < n; ++i) {
          term *= sums[i][t];
          abs_t[i] = std::abs(sums[i][t]);
          prefix[i + 1] = prefix[i] * abs_t[i];
        }
        suffix[n] = 1.0;
        for (unsigned i = n; i-- > 0;) suffix[i] = suffix[i + 1] * abs_t[i];
        double leave_one_out = 0.0;
        for (unsigned i = 0; i < n; ++i) leave_one_out += prefix[i] * suffix[i + 1];
        const double magnitude = prefix[n];
        part.magnitude += magnitude;
        part.term_error += delta * leave_one_out + (n + 4) * kEps * magnitude;

        if (t == 0) {
          principal = term;
        } else if (compensated) {
          nonprincipal_acc.add(cld(term));
        } else {
          nonprincipal += term;
        }
      }
      const cld np = compensated ? nonprincipal_acc.value() : cld(nonprincipal);
      const cld tw(twist);
      if (compensated) {
        r1_acc.add(np * tw);
        if (!lambda_zero) r2_acc.add(cld(principal) * tw);
      } else {
        part.r1 += np * tw;
        if (!lambda_zero) part.r2 += cld(principal) * tw;
      }
    }
    if (compensated) {
      part.r1 = r1_acc.value();
      part.r2 = r2_acc.value();
    }
    partials[c] = part;
  });

  CompensatedSum<cld> r1_total, r2_total;
  long double magnitude = 0, term_error = 0;
  for (const auto& part : partials) {
    r1_total.add(part.r1);
    r2_total.add(part.r2);
    magnitude += part.magnitude;
    term_error += part.term_error;
  }

  const long double norm = static_cast<long double>(order) * static_cast<long double>(lambda_count);
  // Exact main term: the principal character at lambda = 0 contributes prod_i #{x : G_i(x) != 0}.
  long double main_numerator = 1;
  for (unsigned i = 0; i < n; ++i) {
    const auto nonzero = std::count_if(tables[i].g.begin(), tables[i].g.end(), [](Residue y) { return y != 0; });
    main_numerator *= static_cast<long double>(nonzero);
  }
  const long double main_term = main_numerator / norm;
  const cld r1 = r1_total.value() / norm;
  const cld r2 = r2_total.value() / norm;
  const cld total = cld(main_term) + r1 + r2;

  // Summation error over order * lambda_count terms (pairwise-free worst case
  // for plain accumulation, a small constant for the compensated one).
  const long double terms = static_cast<long double>(order) * static_cast<long double>(lambda_count);
  const long double sum_factor = compensated ? 4.0L * kEps : terms * kEps;

  CountResult out;
  const long double rounded = std::max<long double>(0.0L, std::round(total.real()));
  out.count = static_cast<std::uint64_t>(rounded);
  out.main_term = static_cast<double>(main_term);
  out.r1 = cplx(static_cast<double>(r1.real()), static_cast<double>(r1.imag()));
  out.r2 = cplx(static_cast<double>(r2.real()), static_cast<double>(r2.imag()));
  out.residual = static_cast<double>(std::abs(total - cld(rounded)));
  out.error_bound = static_cast<double>((term_error + sum_factor * magnitude) / norm);
  out.compensated = compensated;
  return out;
}

bool acceptable(const CountResult& r) {
  const double tol = 1e-6 * std::max(1.0, static_cast<double>(r.count));
  return r.residual < tol && r.error_bound < 0.5;
}

}  // namespace

CountResult count_spectral(const FieldCtx& ctx, const SystemSpec& sys, const BoxSpec& box, const CountOptions& opts) {
  auto warnings = validate_system(ctx, sys);
  validate_box(ctx, box, sys.n);
  const double cost = std::pow(static_cast<double>(ctx.p()), sys.s) * static_cast<double>(ctx.order()) * sys.n *
                      static_cast<double>(box.h);
  if (!opts.force && cost > opts.cost_cap) {
    throw CostGuard("spectral count needs ~" + std::to_string(cost) + " term operations, cap is " +
                    std::to_string(opts.cost_cap));
  }

  const auto tables = build_tables(ctx, sys, box);
  CountResult result = spectral_pass(ctx, sys, box, tables, opts, opts.compensated);
  if (!acceptable(result) && !opts.compensated) {
    result = spectral_pass(ctx, sys, box, tables, opts, true);
  }
  if (!acceptable(result)) {
    throw PrecisionLoss("spectral total is not reliably an integer: residual " + std::to_string(result.residual) +
                        ", error bound " + std::to_string(result.error_bound) + ", nearest integer " +
                        std::to_string(result.count));
  }
  result.warnings = std::move(warnings);
  return result;
}

std::uint64_t count_product_only(const FieldCtx& ctx, Residue a, const BoxSpec& box,
                                 const std::vector<ProductFactor>& product_form, const CountOptions& opts) {
  SystemSpec sys;
  sys.n = static_cast<unsigned>(box.u.size());
  sys.s = 0;
  sys.a = a;
  sys.c.assign(sys.n, {});
  sys.k.assign(sys.n, {});
  sys.product_form = product_form;
  return count_spectral(ctx, sys, box, opts).count;
}

Density predicted_density(const SystemSpec& sys, const BoxSpec& box, Residue p) {
  const double hn = pow_u(static_cast<double>(box.h), sys.n);
  const double ps = pow_u(static_cast<double>(p), sys.s);
  return {hn / (ps * static_cast<double>(p)), hn / (ps * static_cast<double>(p - 1))};
}

}  // namespace congbox
