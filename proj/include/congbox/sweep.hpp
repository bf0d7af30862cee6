#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "congbox/sums.hpp"

namespace congbox {

enum class SweepTarget { Chang, Wooley, Acz, Theorem, Weil };

SweepTarget parse_target(std::string_view name);
std::string_view target_name(SweepTarget t);

/// One grid point: a prime and either a fixed side length or h = ceil(p^theta).
struct GridPoint {
  std::uint64_t p = 0;
  std::optional<std::uint64_t> h;
  std::optional<double> h_exponent;

  std::uint64_t resolve_h() const;
  std::string describe() const;
};

/// Parses "101:10,1009:p^0.5" (entries separated by commas or whitespace).
std::vector<GridPoint> parse_grid(std::string_view text);

struct SweepPlan {
  SweepTarget target = SweepTarget::Acz;
  std::vector<GridPoint> grid;
  unsigned instances = 10;
  std::uint64_t seed = 1;

  double kappa = 0.25;
  unsigned max_degree = 5;  // K: phase-polynomial degree cap for chang/wooley/weil
  unsigned n = 6;           // theorem target
  unsigned s = 1;
  unsigned k_lo = 3;        // exponent range for generated systems
  unsigned k_hi = 5;
  bool paper_regime = true;

  double slack_eps = 0.1;   // acz target
  double slack_c = 1.0;
  double h_jitter = 0.0;    // acz target: h drawn from h (1 +- jitter)

  unsigned workers = 1;
  BatchMethod batch = BatchMethod::Direct;
};

struct SweepRow {
  std::uint64_t p = 0;
  std::uint64_t h = 0;
  unsigned n = 0;
  unsigned s = 0;
  std::uint64_t seed = 0;
  double exact = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
  bool flagged = false;
  std::vector<double> extra;  // aligned with SweepReport::extra_columns
};

struct SweepReport {
  SweepTarget target = SweepTarget::Acz;
  std::vector<std::string> extra_columns;
  std::vector<SweepRow> rows;  // sorted by (p, h), instance order within ties
  /// Over unflagged rows; NaN when there are none.
  double max_ratio = 0.0;
  /// Least-squares slope of log(ratio) against log(p) over unflagged rows;
  /// NaN with fewer than two distinct primes.
  double trend_slope = 0.0;
  std::size_t flagged_rows = 0;
};

/// Evaluates every (grid point, instance) pair. Row seeds derive from the plan
/// seed, the grid index and the instance index, so reports do not depend on
/// the worker count. Guards from the exact computations propagate.
SweepReport run_sweep(const SweepPlan& plan);

/// Extra columns emitted for each target, in order.
std::vector<std::string> extra_columns_for(SweepTarget t);

}  // namespace congbox
