#include <cmath>
#include <functional>

#include "doctest.h"

#include "congbox/bounds.hpp"
#include "congbox/error.hpp"

using namespace congbox;

namespace {

std::string error_name(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.name();
  }
  return "none";
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("spot values") {
  CHECK(eta(0.25, 3) == doctest::Approx(0.00057870370370370367).epsilon(1e-12));
  CHECK(wooley_bound(100, 1e6, 3) == doctest::Approx(146.41588833612778).epsilon(1e-12));
  CHECK(wooley_short_bound(100, 3) == doctest::Approx(std::pow(100.0, 5.0 / 6.0)).epsilon(1e-12));

  const auto c = chang_bound(1e4, 1e6, 0.25, 3);
  CHECK_FALSE(c.flagged);
  CHECK(c.value == doctest::Approx(9920.3678857440227).epsilon(1e-12));

  const auto t = theorem_error_bound(151, 809, 6, 0.25, 3, 5);
  CHECK_FALSE(t.flagged);
  CHECK(t.value == doctest::Approx(15116838892.625904).epsilon(1e-12));

  CHECK(acz_bound(5, 11, 0, 2) == doctest::Approx(106.81818181818181).epsilon(1e-12));
  CHECK(weil_bound(1e6) == doctest::Approx(13815.510557964273).epsilon(1e-12));
  CHECK(density_threshold(1, eta(0.25, 5)) == doctest::Approx(5476.0).epsilon(1e-12));
}

TEST_CASE("eta stays below the Weyl exponent") {
  for (int i = 1; i <= 100; ++i) {
    const double kappa = i / 100.0;
    for (std::uint64_t K = 3; K <= 12; ++K) CHECK(eta(kappa, K) < 1.0 / (2.0 * K * (K - 2)));
  }
}

TEST_CASE("flags outside the claimed ranges") {
  const auto short_h = chang_bound(10, 1e6, 0.25, 3);
  CHECK(short_h.flagged);
  CHECK(short_h.value == 10);
  CHECK(theorem_error_bound(10, 809, 6, 0.25, 3, 5).flagged);
  CHECK(theorem_error_bound(809, 809, 6, 0.25, 3, 5).flagged);
  CHECK(wooley_short_in_range(200, 1e4, 3));
  CHECK_FALSE(wooley_short_in_range(50, 1e4, 3));
}

TEST_CASE("parameters from a system") {
  SystemSpec sys;
  sys.n = 4;
  sys.s = 2;
  sys.k = {{3, 7}, {4, 5}, {3, 6}, {5, 9}};
  const BoxSpec box{{0, 0, 0, 0}, 40};
  const auto bp = BoundParams::from_system(sys, box, 101, 0.3);
  CHECK(bp.k_min == 3);
  CHECK(bp.k_max == 9);
  CHECK(bp.n == 4);
  CHECK(bp.h == 40);
  CHECK(theorem_error_bound(bp).value == theorem_error_bound(40, 101, 4, 0.3, 3, 9).value);
}

TEST_CASE("domain errors") {
  CHECK(error_name([] { eta(0, 3); }) == "DomainError");
  CHECK(error_name([] { eta(-1, 3); }) == "DomainError");
  CHECK(error_name([] { wooley_bound(100, 1e6, 2); }) == "DomainError");
  CHECK(error_name([] { wooley_short_bound(100, 1); }) == "DomainError");
  CHECK(error_name([] { theorem_error_bound(10, 101, 2, 0.25, 3, 3); }) == "DomainError");
}

}
