#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"

#include "congbox/counting.hpp"
#include "congbox/error.hpp"

using namespace congbox;

namespace {

SystemSpec cubic_system(Residue b) {
  SystemSpec sys;
  sys.n = 3;
  sys.s = 1;
  sys.a = 1;
  sys.b = {b};
  sys.c.assign(3, {1});
  sys.k.assign(3, {3});
  return sys;
}

std::string error_name(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.name();
  }
  return "none";
}

SystemSpec random_system(Residue p, unsigned n, unsigned s, std::mt19937_64& gen) {
  auto pick = [&](std::uint64_t lo, std::uint64_t hi) { return std::uniform_int_distribution<std::uint64_t>(lo, hi)(gen); };
  SystemSpec sys;
  sys.n = n;
  sys.s = s;
  sys.a = static_cast<Residue>(pick(1, p - 1));
  for (unsigned j = 0; j < s; ++j) sys.b.push_back(static_cast<Residue>(pick(0, p - 1)));
  sys.c.assign(n, {});
  sys.k.assign(n, {});
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < s; ++j) {
      sys.c[i].push_back(static_cast<Residue>(pick(1, p - 1)));
      sys.k[i].push_back(pick(3, 7));
    }
  return sys;
}

}  // namespace

TEST_SUITE("counting") {

TEST_CASE("known counts") {
  const auto ctx = build_field_ctx(7);
  SystemSpec s0;
  s0.a = 5;
  const auto full = BoxSpec::full(3, 7);
  CHECK(count_bruteforce(ctx, s0, full) == 36);
  const auto r0 = count_spectral(ctx, s0, full);
  CHECK(r0.count == 36);
  CHECK(r0.main_term == doctest::Approx(36.0));
  CHECK(std::abs(r0.r2) == 0.0);
  CHECK(std::abs(r0.r1) < 1e-9);

  const auto r = count_spectral(ctx, cubic_system(3), full);
  CHECK(r.count == 9);
  CHECK(count_bruteforce(ctx, cubic_system(3), full) == 9);
  CHECK(r.main_term == doctest::Approx(216.0 / 42.0).epsilon(1e-12));
  CHECK(r.residual < 1e-6);

  CHECK(count_spectral(ctx, cubic_system(0), full).count == 0);
  CHECK(count_bruteforce(ctx, cubic_system(0), full) == 0);
}

TEST_CASE("product-only count") {
  const auto ctx = build_field_ctx(11);
  const BoxSpec box{{1, 2, 3}, 4};
  CHECK(count_product_only(ctx, 2, box) == 5);
  SystemSpec sys;
  sys.a = 2;
  CHECK(count_bruteforce(ctx, sys, box) == 5);
}

TEST_CASE("full box with s = 0 gives (p-1)^(n-1)") {
  for (Residue p : {Residue{5}, Residue{11}, Residue{13}}) {
    const auto ctx = build_field_ctx(p);
    for (unsigned n : {2u, 3u, 4u}) {
      SystemSpec sys;
      sys.n = n;
      sys.a = 2;
      const auto r = count_spectral(ctx, sys, BoxSpec::full(n, p));
      CHECK(r.count == static_cast<std::uint64_t>(std::pow(p - 1, n - 1)));
      CHECK(r.r2 == cplx{});
    }
  }
}

TEST_CASE("spectral equals brute force on random systems") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 30; ++trial) {
    const Residue p = std::vector<Residue>{13, 17, 23, 29}[trial % 4];
    const auto ctx = build_field_ctx(p);
    const auto sys = random_system(p, 3 + trial % 2, 1 + trial % 2, gen);
    BoxSpec box;
    box.h = std::uniform_int_distribution<std::uint64_t>(1, 9)(gen);
    for (unsigned i = 0; i < sys.n; ++i) box.u.push_back(std::uniform_int_distribution<std::uint64_t>(0, p - 1 - box.h)(gen));
    const auto brute = count_bruteforce(ctx, sys, box);
    CHECK(count_spectral(ctx, sys, box).count == brute);
    CountOptions dft;
    dft.batch = BatchMethod::Dft;
    CHECK(count_spectral(ctx, sys, box, dft).count == brute);
    CountOptions comp;
    comp.compensated = true;
    comp.workers = 3;
    const auto rc = count_spectral(ctx, sys, box, comp);
    CHECK(rc.count == brute);
    CHECK(rc.compensated);
  }
}

TEST_CASE("p = 13, n = 4, s = 1, h = 5") {
  const auto ctx = build_field_ctx(13);
  std::mt19937_64 gen(4);
  const auto sys = random_system(13, 4, 1, gen);
  const BoxSpec box{{2, 0, 7, 4}, 5};
  CHECK(count_spectral(ctx, sys, box).count == count_bruteforce(ctx, sys, box));
}

TEST_CASE("permuting variables leaves the count unchanged") {
  std::mt19937_64 gen(8);
  const auto ctx = build_field_ctx(19);
  const auto sys = random_system(19, 4, 2, gen);
  const BoxSpec box{{1, 5, 9, 2}, 8};
  const auto base = count_spectral(ctx, sys, box).count;
  std::vector<unsigned> perm{0, 1, 2, 3};
  while (std::next_permutation(perm.begin(), perm.end())) {
    SystemSpec q = sys;
    BoxSpec qb = box;
    for (unsigned i = 0; i < 4; ++i) {
      q.c[i] = sys.c[perm[i]];
      q.k[i] = sys.k[perm[i]];
      qb.u[i] = box.u[perm[i]];
    }
    CHECK(count_spectral(ctx, q, qb).count == base);
  }
}

TEST_CASE("splitting the box partitions the count") {
  std::mt19937_64 gen(12);
  const auto ctx = build_field_ctx(23);
  const auto sys = random_system(23, 3, 1, gen);
  const auto whole = count_spectral(ctx, sys, BoxSpec{{0, 0, 0}, 22}).count;
  CHECK(whole == count_bruteforce(ctx, sys, BoxSpec{{0, 0, 0}, 22}));
  // Halving every axis gives eight cubes of side 11.
  std::uint64_t parts = 0;
  for (std::uint64_t u0 : {0, 11})
    for (std::uint64_t u1 : {0, 11})
      for (std::uint64_t u2 : {0, 11}) parts += count_spectral(ctx, sys, BoxSpec{{u0, u1, u2}, 11}).count;
  CHECK(parts == whole);
}

TEST_CASE("product forms") {
  std::mt19937_64 gen(30);
  const auto ctx = build_field_ctx(17);
  auto sys = random_system(17, 3, 1, gen);
  const BoxSpec box{{1, 3, 0}, 9};
  sys.product_form = {ProductFactor::power(3), ProductFactor::power(5), ProductFactor::identity()};
  CHECK(count_spectral(ctx, sys, box).count == count_bruteforce(ctx, sys, box));
  sys.product_form = {ProductFactor::polynomial(PolyMod{{1, 1}}), ProductFactor::polynomial(PolyMod{{0, 2, 1}}),
                      ProductFactor::power(7)};
  const auto r = count_spectral(ctx, sys, box);
  CHECK(r.count == count_bruteforce(ctx, sys, box));
  CHECK(sys.product_form[1].describe().find("poly(") != std::string::npos);
}

TEST_CASE("validation and guards") {
  const auto ctx = build_field_ctx(7);
  auto sys = cubic_system(3);
  const auto full = BoxSpec::full(3, 7);
  CHECK(validate_system(ctx, sys).empty());

  auto bad = sys;
  bad.a = 0;
  CHECK(error_name([&] { validate_system(ctx, bad); }) == "InvalidInput");
  bad = sys;
  bad.c[1][0] = 0;
  CHECK(error_name([&] { validate_system(ctx, bad); }) == "InvalidInput");
  bad = sys;
  bad.product_form = {ProductFactor::power(2), ProductFactor::identity(), ProductFactor::identity()};
  CHECK(error_name([&] { validate_system(ctx, bad); }) == "InvalidInput");
  bad = sys;
  bad.k[0][0] = 2;
  CHECK_FALSE(validate_system(ctx, bad).empty());
  bad.paper_regime = true;
  CHECK(error_name([&] { validate_system(ctx, bad); }) == "InvalidInput");

  SystemSpec s0;
  CHECK_FALSE(validate_system(ctx, s0).empty());

  CHECK(error_name([&] { validate_box(ctx, BoxSpec{{1, 0, 0}, 6}, 3); }) == "InvalidInput");
  CHECK(error_name([&] { validate_box(ctx, BoxSpec{{0, 0}, 3}, 3); }) == "InvalidInput");

  CountOptions tight;
  tight.brute_cap = 100;
  CHECK(error_name([&] { count_bruteforce(ctx, sys, full, tight); }) == "SizeGuard");
  tight.force = true;
  CHECK(count_bruteforce(ctx, sys, full, tight) == 9);

  CountOptions cheap;
  cheap.cost_cap = 10;
  CHECK(error_name([&] { count_spectral(ctx, sys, full, cheap); }) == "CostGuard");
}

TEST_CASE("predicted density") {
  SystemSpec sys;
  sys.n = 6;
  sys.s = 1;
  const BoxSpec box{std::vector<std::uint64_t>(6, 0), 32};
  const auto d = predicted_density(sys, box, 101);
  CHECK(d.theorem_main == doctest::Approx(105258.4868).epsilon(1e-9));
  CHECK(d.separated_main == doctest::Approx(std::pow(32.0, 6) / (100.0 * 101.0)).epsilon(1e-12));
}

}
