#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "congbox/error.hpp"
#include "congbox/sums.hpp"

using namespace congbox;

namespace {

std::uint64_t quadruples_brute(Residue p, std::uint64_t u, std::uint64_t h) {
  std::uint64_t n = 0;
  for (std::uint64_t a = u + 1; a <= u + h; ++a)
    for (std::uint64_t b = u + 1; b <= u + h; ++b)
      for (std::uint64_t c = u + 1; c <= u + h; ++c)
        for (std::uint64_t d = u + 1; d <= u + h; ++d)
          if (a * b % p == c * d % p) ++n;
  return n;
}

IntervalWeights random_weights(std::uint64_t u, std::uint64_t h, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> unit(0, 1);
  IntervalWeights w{u, h, {}};
  for (std::uint64_t k = 0; k < h; ++k) w.w.push_back(std::polar(std::sqrt(unit(gen)), 2 * std::numbers::pi * unit(gen)));
  return w;
}

}  // namespace

TEST_SUITE("sums") {

TEST_CASE("polynomials") {
  const std::vector<std::int64_t> c{-1, 0, 3, 0};
  const auto f = PolyMod::from_integers(c, 7);
  CHECK(f.coeffs[0] == 6);
  CHECK(f.degree() == 2);
  CHECK(f.eval(2, 7) == 4);
  CHECK(PolyMod{}.degree() == -1);
  CHECK(PolyMod::monomial(2, 3).eval(3, 7) == 54 % 7);
  CHECK(PolyMod::identity().eval(5, 7) == 5);
}

TEST_CASE("known sums") {
  auto ctx = build_field_ctx(7);
  const auto s = exp_sum(ctx, PolyMod::monomial(1, 3), 0, 6);
  CHECK(s.real() == doctest::Approx(3.7409388111524011).epsilon(1e-12));
  CHECK(std::abs(s.imag()) < 1e-12);

  ctx = build_field_ctx(11);
  const auto m = mixed_char_sum(ctx, 5, PolyMod::identity(), PolyMod::monomial(1, 2), 2, 5);
  CHECK(m.real() == doctest::Approx(0.41541501300188455).epsilon(1e-12));
  CHECK(m.imag() == doctest::Approx(-0.90963199535451966).epsilon(1e-12));
}

TEST_CASE("complete sums vanish") {
  const auto ctx = build_field_ctx(13);
  CHECK(std::abs(exp_sum(ctx, PolyMod::identity(), 0, 12) - cplx{-1, 0}) < 1e-12);
  for (std::uint64_t t = 1; t < 12; ++t)
    CHECK(std::abs(mixed_char_sum(ctx, t, PolyMod::identity(), PolyMod{}, 0, 12)) < 1e-12);
}

TEST_CASE("batch sums agree with per-character evaluation and between methods") {
  std::mt19937_64 gen(11);
  for (Residue p : {Residue{7}, Residue{101}, Residue{1009}}) {
    const auto ctx = build_field_ctx(p);
    const auto w = random_weights(3, p - 5, gen);
    const auto direct = batch_char_sums(ctx, w);
    const auto dft = batch_char_sums(ctx, w, {BatchMethod::Dft, nullptr});
    REQUIRE(direct.size() == p - 1);
    for (std::uint64_t t = 0; t < p - 1; ++t) {
      CHECK(std::abs(direct[t] - dft[t]) < 1e-9 * p);
      if (t % 17 == 0) {
        cplx ref{};
        for (std::uint64_t k = 0; k < w.h; ++k) ref += w.w[k] * mult_char(ctx, t, static_cast<Residue>(w.u + 1 + k));
        CHECK(std::abs(ref - direct[t]) < 1e-9 * p);
      }
    }
  }
}

TEST_CASE("character transform skips zero points") {
  const auto ctx = build_field_ctx(7);
  const std::vector<Residue> pts{0, 1};
  const std::vector<cplx> w{cplx{5, 0}, cplx{1, 0}};
  for (const auto& v : character_transform(ctx, pts, w)) CHECK(std::abs(v - cplx{1, 0}) < 1e-15);
}

TEST_CASE("Parseval") {
  std::mt19937_64 gen(3);
  for (Residue p : {Residue{7}, Residue{13}, Residue{101}, Residue{1009}}) {
    const auto ctx = build_field_ctx(p);
    const auto w = random_weights(0, p / 2, gen);
    double mass = 0, energy = 0;
    for (const auto& v : w.w) mass += std::norm(v);
    for (const auto& v : batch_char_sums(ctx, w)) energy += std::norm(v);
    CHECK(energy == doctest::Approx((p - 1) * mass).epsilon(1e-10));
  }
}

TEST_CASE("quadruple counts") {
  CHECK(acz_quadruple_count(build_field_ctx(5), 0, 4) == 64);
  CHECK(acz_quadruple_count(build_field_ctx(11), 2, 5) == 73);
  for (Residue p : {Residue{13}, Residue{31}}) {
    const auto ctx = build_field_ctx(p);
    for (std::uint64_t h : {1, 4, 9, 12}) {
      if (h + 3 > p - 1) continue;
      const auto n = acz_quadruple_count(ctx, 3, h);
      CHECK(n == quadruples_brute(p, 3, h));
      CHECK(n >= 2 * h * h - h);
    }
  }
  try {
    acz_quadruple_count(build_field_ctx(101), 0, 50, 100);
    FAIL("expected SizeGuard");
  } catch (const Error& e) {
    CHECK(e.name() == "SizeGuard");
  }
}

TEST_CASE("fourth moment identity") {
  std::mt19937_64 gen(9);
  for (Residue p : {Residue{13}, Residue{101}}) {
    const auto ctx = build_field_ctx(p);
    for (std::uint64_t h : {1, 5, 11}) {
      const auto ones = IntervalWeights::ones(1, h);
      CHECK(fourth_moment(ctx, ones) ==
            doctest::Approx((p - 1.0) * static_cast<double>(acz_quadruple_count(ctx, 1, h))).epsilon(1e-9));
      const auto w = random_weights(1, h, gen);
      CHECK(fourth_moment(ctx, w) == doctest::Approx((p - 1.0) * weighted_quadruple_sum(ctx, w)).epsilon(1e-9));
      CHECK(fourth_moment(ctx, w, {BatchMethod::Dft, nullptr}) == doctest::Approx(fourth_moment(ctx, w)).epsilon(1e-9));
    }
  }
}

TEST_CASE("validation") {
  const auto ctx = build_field_ctx(7);
  auto name_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.name();
    }
    return std::string("none");
  };
  CHECK(name_of([&] { validate_interval(ctx, 0, 0); }) == "IntervalOutOfRange");
  CHECK(name_of([&] { validate_interval(ctx, 1, 6); }) == "IntervalOutOfRange");
  CHECK(name_of([&] { validate_interval(ctx, 0, 6); }) == "none");
  CHECK(name_of([&] { validate_poly(ctx, PolyMod{{7}}); }) == "InvalidInput");
  CHECK(name_of([&] { exp_sum(ctx, PolyMod::identity(), 3, 4); }) == "IntervalOutOfRange");
  CHECK(name_of([&] { mixed_char_sum(ctx, 9, PolyMod::identity(), PolyMod{}, 0, 3); }) == "IndexOutOfRange");
  IntervalWeights big{0, 2, {cplx{2, 0}, cplx{0, 0}}};
  CHECK(name_of([&] { big.validate(ctx); }) == "InvalidInput");
}

}
