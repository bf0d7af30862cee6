#include "congbox/field.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "congbox/error.hpp"

namespace congbox {

namespace {

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t pow_mod64(std::uint64_t x, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  x %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, x, m);
    x = mul_mod(x, x, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::size_t memory_cap_from_env() {
  if (const char* s = std::getenv("CONGBOX_MEMORY_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMemoryCap;
}

Residue mod_pow(Residue x, std::uint64_t e, Residue p) {
  return static_cast<Residue>(pow_mod64(x, e, p));
}

Residue mod_inverse(Residue x, Residue p) {
  if (x % p == 0) throw DomainError("zero has no inverse modulo " + std::to_string(p));
  return mod_pow(x % p, p - 2, p);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2u, 3u, 5u, 7u}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // Bases 2, 7, 61 decide primality for every n < 4,759,123,141.
  for (std::uint64_t a : {2u, 7u, 61u}) {
    if (a % n == 0) continue;
    std::uint64_t x = pow_mod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Residue smallest_primitive_root(Residue p) {
  if (p == 2) return 1;
  const auto factors = prime_factors(p - 1);
  for (Residue g = 2; g < p; ++g) {
    bool ok = true;
    for (auto q : factors) {
      if (mod_pow(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw NotPrime(std::to_string(p) + " has no primitive root");
}

std::size_t FieldCtx::table_bytes(std::uint64_t p) {
  return static_cast<std::size_t>(p) * sizeof(Residue) + static_cast<std::size_t>(p) * sizeof(cplx) +
         static_cast<std::size_t>(p - 1) * sizeof(cplx);
}

FieldCtx build_field_ctx(std::uint64_t p, std::optional<std::size_t> memory_cap) {
  if (p < 3 || p > kMaxModulus || !is_prime(p)) {
    throw NotPrime(std::to_string(p) + " is not an odd prime in [3, 2^31]");
  }
  const std::size_t cap = memory_cap.value_or(memory_cap_from_env());
  if (FieldCtx::table_bytes(p) > cap) {
    throw TooLarge("tables for p=" + std::to_string(p) + " need " +
                   std::to_string(FieldCtx::table_bytes(p)) + " bytes, cap is " + std::to_string(cap));
  }

  FieldCtx ctx;
  ctx.p_ = static_cast<Residue>(p);
  ctx.g_ = smallest_primitive_root(ctx.p_);
  ctx.ind_.assign(p, 0);
  std::uint64_t power = 1;
  for (Residue j = 0; j + 1 < p; ++j) {
    ctx.ind_[power] = j;
    power = power * ctx.g_ % p;
  }

  const double two_pi = 2.0 * std::numbers::pi;
  ctx.add_roots_.resize(p);
  for (std::uint64_t z = 0; z < p; ++z) {
    ctx.add_roots_[z] = std::polar(1.0, two_pi * static_cast<double>(z) / static_cast<double>(p));
  }
  const std::uint64_t order = p - 1;
  ctx.mult_roots_.resize(order);
  for (std::uint64_t j = 0; j < order; ++j) {
    ctx.mult_roots_[j] = std::polar(1.0, two_pi * static_cast<double>(j) / static_cast<double>(order));
  }
  return ctx;
}

FieldCtx FieldCtx::with_corrupted_log_entry() const {
  FieldCtx copy = *this;
  // ind[2] takes the value of ind[p-1]; for p >= 5 these are distinct units.
  if (copy.p_ > 3) copy.ind_[2] = copy.ind_[copy.p_ - 1];
  return copy;
}

cplx mult_char(const FieldCtx& ctx, std::uint64_t t, Residue x) {
  if (t >= ctx.order()) {
    throw IndexOutOfRange("character index " + std::to_string(t) + " not in [0, " +
                          std::to_string(ctx.order() - 1) + "]");
  }
  if (x % ctx.p() == 0) return {0.0, 0.0};
  const std::uint64_t j = t * ctx.ind(x % ctx.p()) % ctx.order();
  return ctx.mult_root(static_cast<Residue>(j));
}

cplx add_char(const FieldCtx& ctx, std::int64_t z) {
  const std::int64_t p = ctx.p();
  std::int64_t r = z % p;
  if (r < 0) r += p;
  return ctx.add_root(static_cast<Residue>(r));
}

}  // namespace congbox
