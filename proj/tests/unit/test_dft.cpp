#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "congbox/dft.hpp"

using namespace congbox;
using cplx = std::complex<double>;

namespace {

std::vector<cplx> naive(const std::vector<cplx>& in) {
  const std::size_t n = in.size();
  std::vector<cplx> out(n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t j = 0; j < n; ++j)
      out[t] += in[j] * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(t * j % n) / n);
  return out;
}

}  // namespace

TEST_SUITE("dft") {

TEST_CASE("matches the naive transform for assorted lengths") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> d(-1, 1);
  for (std::size_t n : {1, 2, 3, 6, 8, 12, 100, 127, 1008}) {
    std::vector<cplx> in(n);
    for (auto& v : in) v = {d(gen), d(gen)};
    const auto ref = naive(in);
    CyclicDft plan(n);
    const auto out = plan(in);
    double err = 0;
    for (std::size_t t = 0; t < n; ++t) err = std::max(err, std::abs(out[t] - ref[t]));
    INFO("n = " << n);
    CHECK(err < 1e-9 * static_cast<double>(n));
  }
}

TEST_CASE("delta transforms to all ones") {
  CyclicDft plan(10);
  std::vector<cplx> v(10);
  v[0] = 1;
  for (const auto& x : plan(v)) CHECK(std::abs(x - cplx{1, 0}) < 1e-12);
}

}
