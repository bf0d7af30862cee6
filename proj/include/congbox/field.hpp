#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace congbox {

using Residue = std::uint32_t;
using cplx = std::complex<double>;

/// Largest modulus accepted; keeps every product of two residues inside 64 bits.
inline constexpr std::uint64_t kMaxModulus = std::uint64_t{1} << 31;

/// Default cap on the bytes a FieldCtx may allocate for its tables. The
/// CONGBOX_MEMORY_CAP environment variable (bytes) overrides it.
inline constexpr std::size_t kDefaultMemoryCap = std::size_t{2} << 30;

std::size_t memory_cap_from_env();

/// x^e mod p by square-and-multiply. 0^0 is 1 by convention.
Residue mod_pow(Residue x, std::uint64_t e, Residue p);

Residue mod_inverse(Residue x, Residue p);

/// Deterministic Miller-Rabin, exact for n < 2^32.
bool is_prime(std::uint64_t n);

/// Distinct prime factors of n, ascending, by trial division.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

/// Smallest positive primitive root modulo the prime p.
Residue smallest_primitive_root(Residue p);

/// Immutable prime-field context: the modulus, its smallest primitive root,
/// the discrete-log table, and the two root-of-unity tables used to evaluate
/// additive characters e_p(z) and multiplicative characters chi_t.
///
/// Characters are indexed by t in [0, p-2] with chi_t(g^j) = exp(2 pi i t j/(p-1))
/// and chi_t(0) = 0 for every t (including the principal character t = 0).
class FieldCtx {
 public:
  Residue p() const noexcept { return p_; }
  Residue g() const noexcept { return g_; }
  /// p - 1, the order of the multiplicative group and the number of characters.
  Residue order() const noexcept { return p_ - 1; }

  /// Discrete log of a unit x (1 <= x <= p-1). Entry 0 is unused.
  Residue ind(Residue x) const noexcept { return ind_[x]; }
  std::span<const Residue> ind_table() const noexcept { return ind_; }

  /// e_p(z) for z in [0, p-1].
  const cplx& add_root(Residue z) const noexcept { return add_roots_[z]; }
  /// exp(2 pi i j/(p-1)) for j in [0, p-2].
  const cplx& mult_root(Residue j) const noexcept { return mult_roots_[j]; }
  std::span<const cplx> add_roots() const noexcept { return add_roots_; }
  std::span<const cplx> mult_roots() const noexcept { return mult_roots_; }

  /// Bytes held by the tables of a context for modulus p.
  static std::size_t table_bytes(std::uint64_t p);

  /// Test hook used by the verification battery: returns a copy with one
  /// discrete-log entry overwritten so that the table is no longer a bijection.
  FieldCtx with_corrupted_log_entry() const;

 private:
  friend FieldCtx build_field_ctx(std::uint64_t p, std::optional<std::size_t> memory_cap);

  Residue p_ = 0;
  Residue g_ = 0;
  std::vector<Residue> ind_;
  std::vector<cplx> add_roots_;
  std::vector<cplx> mult_roots_;
};

/// Builds the context for an odd prime 3 <= p <= 2^31.
/// Throws NotPrime for composite p (or p outside range) and TooLarge when the
/// tables would exceed the memory cap (defaults to memory_cap_from_env()).
FieldCtx build_field_ctx(std::uint64_t p, std::optional<std::size_t> memory_cap = std::nullopt);

/// chi_t(x). Throws IndexOutOfRange unless 0 <= t <= p-2; x must be reduced.
cplx mult_char(const FieldCtx& ctx, std::uint64_t t, Residue x);

/// e_p(z) for any integer z (reduced internally).
cplx add_char(const FieldCtx& ctx, std::int64_t z);

}  // namespace congbox
