#include <cmath>
#include <numbers>

#include "doctest.h"

#include "congbox/error.hpp"
#include "congbox/field.hpp"

using namespace congbox;

TEST_SUITE("field") {

TEST_CASE("modular helpers") {
  CHECK(mod_pow(3, 6, 7) == 1);
  CHECK(mod_pow(0, 0, 7) == 1);
  CHECK(mod_pow(2, 30, 1000000007) == 73741817);
  CHECK(mod_inverse(3, 7) == 5);
  CHECK(is_prime(2147483647));
  CHECK_FALSE(is_prime(2147483649ULL));
  CHECK_FALSE(is_prime(1));
  CHECK(prime_factors(360) == std::vector<std::uint64_t>{2, 3, 5});
  CHECK(smallest_primitive_root(7) == 3);
  CHECK(smallest_primitive_root(11) == 2);
  CHECK(smallest_primitive_root(41) == 6);
}

TEST_CASE("discrete log table for p = 7") {
  const auto ctx = build_field_ctx(7);
  CHECK(ctx.g() == 3);
  CHECK(ctx.ind(1) == 0);
  CHECK(ctx.ind(3) == 1);
  CHECK(ctx.ind(2) == 2);
  CHECK(ctx.ind(6) == 3);
  for (Residue x = 1; x < 7; ++x) CHECK(mod_pow(ctx.g(), ctx.ind(x), 7) == x);
}

TEST_CASE("characters") {
  const auto ctx = build_field_ctx(7);
  CHECK(std::abs(mult_char(ctx, 3, 3) - cplx{-1, 0}) < 1e-15);
  for (std::uint64_t t = 0; t < 6; ++t) CHECK(mult_char(ctx, t, 0) == cplx{});
  CHECK(std::abs(mult_char(ctx, 0, 5) - cplx{1, 0}) < 1e-15);
  const cplx e1 = std::polar(1.0, 2 * std::numbers::pi / 7);
  CHECK(std::abs(add_char(ctx, 1) - e1) < 1e-15);
  CHECK(std::abs(add_char(ctx, -6) - e1) < 1e-15);
  CHECK(std::abs(add_char(ctx, 0) - cplx{1, 0}) < 1e-15);
}

TEST_CASE("errors") {
  CHECK_THROWS_WITH_AS(build_field_ctx(4), doctest::Contains("4"), Error);
  try {
    build_field_ctx(4);
  } catch (const Error& e) {
    CHECK(e.name() == "NotPrime");
    CHECK(e.kind() == ErrorKind::Validation);
  }
  try {
    build_field_ctx(1009, std::size_t{1024});
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.name() == "TooLarge");
    CHECK(e.kind() == ErrorKind::Guard);
  }
  const auto ctx = build_field_ctx(7);
  try {
    mult_char(ctx, 6, 1);
    FAIL("expected IndexOutOfRange");
  } catch (const Error& e) {
    CHECK(e.name() == "IndexOutOfRange");
  }
}

TEST_CASE("corrupted table is detectable") {
  const auto bad = build_field_ctx(13).with_corrupted_log_entry();
  bool bijective = true;
  std::vector<bool> seen(12, false);
  for (Residue x = 1; x < 13; ++x) {
    if (seen[bad.ind(x)]) bijective = false;
    seen[bad.ind(x)] = true;
  }
  CHECK_FALSE(bijective);
}

}
