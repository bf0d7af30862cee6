#include "congbox/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "congbox/bounds.hpp"
#include "congbox/counting.hpp"
#include "congbox/error.hpp"
#include "congbox/parallel.hpp"
#include "congbox/rng.hpp"

namespace congbox {

SweepTarget parse_target(std::string_view name) {
  if (name == "chang") return SweepTarget::Chang;
  if (name == "wooley") return SweepTarget::Wooley;
  if (name == "acz") return SweepTarget::Acz;
  if (name == "theorem") return SweepTarget::Theorem;
  if (name == "weil") return SweepTarget::Weil;
  throw InvalidInput("unknown sweep target '" + std::string(name) + "' (expected chang, wooley, acz, theorem, weil)");
}

std::string_view target_name(SweepTarget t) {
  switch (t) {
    case SweepTarget::Chang:
      return "chang";
    case SweepTarget::Wooley:
      return "wooley";
    case SweepTarget::Acz:
      return "acz";
    case SweepTarget::Theorem:
      return "theorem";
    case SweepTarget::Weil:
      return "weil";
  }
  return "?";
}

std::vector<std::string> extra_columns_for(SweepTarget t) {
  switch (t) {
    case SweepTarget::Chang:
      return {"u", "t", "degree"};
    case SweepTarget::Wooley:
      return {"u", "degree", "short_bound", "short_in_range"};
    case SweepTarget::Acz:
      return {"u", "diag_lower", "excess_per_h2"};
    case SweepTarget::Theorem:
      return {"a", "count", "main_term", "rel_dev", "k_min", "k_max", "eta", "density_threshold_n"};
    case SweepTarget::Weil:
      return {"u", "t", "g_degree", "f_degree"};
  }
  return {};
}

std::uint64_t GridPoint::resolve_h() const {
  std::uint64_t out = 0;
  if (h) {
    out = *h;
  } else if (h_exponent) {
    // The small offset keeps exact powers such as 10000^0.5 from rounding up.
    out = static_cast<std::uint64_t>(std::ceil(std::pow(static_cast<double>(p), *h_exponent) - 1e-9));
  }
  if (out < 1 || out + 1 > p) {
    throw InvalidInput("grid point " + describe() + " resolves to h=" + std::to_string(out) + " outside [1, p-1]");
  }
  return out;
}

std::string GridPoint::describe() const {
  std::ostringstream os;
  os << p << ':';
  if (h) {
    os << *h;
  } else if (h_exponent) {
    os << "p^" << *h_exponent;
  }
  return os.str();
}

std::vector<GridPoint> parse_grid(std::string_view text) {
  std::vector<GridPoint> out;
  std::string entry;
  auto flush = [&] {
    if (entry.empty()) return;
    const auto colon = entry.find(':');
    if (colon == std::string::npos) throw InvalidInput("grid entry '" + entry + "' must look like P:H or P:p^X");
    GridPoint gp;
    try {
      std::size_t used = 0;
      gp.p = std::stoull(entry.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument("p");
      const std::string hs = entry.substr(colon + 1);
      if (hs.rfind("p^", 0) == 0) {
        gp.h_exponent = std::stod(hs.substr(2), &used);
        if (used != hs.size() - 2) throw std::invalid_argument("theta");
      } else {
        gp.h = std::stoull(hs, &used);
        if (used != hs.size()) throw std::invalid_argument("h");
      }
    } catch (const std::logic_error&) {
      throw InvalidInput("malformed grid entry '" + entry + "'");
    }
    out.push_back(gp);
    entry.clear();
  };
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == ';') {
      flush();
    } else {
      entry.push_back(ch);
    }
  }
  flush();
  if (out.empty()) throw InvalidInput("sweep grid is empty");
  return out;
}

namespace {

PolyMod random_poly(Rng& rng, Residue p, unsigned degree) {
  PolyMod f;
  f.coeffs.resize(degree + 1);
  for (unsigned d = 0; d < degree; ++d) f.coeffs[d] = static_cast<Residue>(rng.uniform(0, p - 1));
  f.coeffs[degree] = static_cast<Residue>(rng.uniform(1, p - 1));
  return f;
}

// prod_k (X - r_k) over `degree` distinct roots: squarefree, hence not a perfect power.
PolyMod random_squarefree(Rng& rng, Residue p, unsigned degree) {
  std::vector<Residue> roots;
  while (roots.size() < degree) {
    const auto r = static_cast<Residue>(rng.uniform(0, p - 1));
    if (std::find(roots.begin(), roots.end(), r) == roots.end()) roots.push_back(r);
  }
  std::vector<std::uint64_t> c{1};
  for (Residue r : roots) {
    std::vector<std::uint64_t> next(c.size() + 1, 0);
    for (std::size_t d = 0; d < c.size(); ++d) {
      next[d + 1] = (next[d + 1] + c[d]) % p;
      next[d] = (next[d] + c[d] * (p - r)) % p;
    }
    c = std::move(next);
  }
  PolyMod f;
  f.coeffs.assign(c.begin(), c.end());
  return f;
}

struct RowJob {
  std::size_t grid_index;
  unsigned instance;
};

void check_plan(const SweepPlan& plan) {
  if (plan.grid.empty()) throw InvalidInput("sweep grid is empty");
  if (plan.instances == 0) throw InvalidInput("instances per grid point must be positive");
  if (!(plan.kappa > 0)) throw InvalidInput("kappa must be positive");
  if (plan.target == SweepTarget::Wooley && plan.max_degree < 3) throw InvalidInput("wooley target needs K >= 3");
  if ((plan.target == SweepTarget::Chang || plan.target == SweepTarget::Weil) && plan.max_degree < 1) {
    throw InvalidInput("K must be >= 1");
  }
  if (plan.target == SweepTarget::Theorem) {
    if (plan.n < 3) throw InvalidInput("theorem target needs n >= 3");
    if (plan.s < 1) throw InvalidInput("theorem target needs s >= 1");
    if (plan.k_lo < 1 || plan.k_lo > plan.k_hi) throw InvalidInput("exponent range needs 1 <= k_lo <= k_hi");
    if (plan.paper_regime && (plan.k_lo < 3 || plan.k_hi - plan.k_lo + 1 < plan.s)) {
      throw InvalidInput("exponent range cannot hold s strictly increasing exponents >= 3");
    }
  }
}

SweepRow evaluate_row(const SweepPlan& plan, const FieldCtx& ctx, std::uint64_t h_nominal, std::uint64_t seed) {
  const Residue p = ctx.p();
  const double pd = static_cast<double>(p);
  Rng rng(seed);
  SweepRow row;
  row.p = p;
  row.h = h_nominal;
  row.seed = seed;

  auto random_u = [&](std::uint64_t h) { return rng.uniform(0, p - 1 - h); };

  switch (plan.target) {
    case SweepTarget::Chang: {
      const std::uint64_t u = random_u(row.h);
      const std::uint64_t t = rng.uniform(1, p - 2);
      const auto degree = static_cast<unsigned>(rng.uniform(1, plan.max_degree));
      const auto f = random_poly(rng, p, degree);
      row.exact = std::abs(mixed_char_sum(ctx, t, PolyMod::identity(), f, u, row.h));
      const auto b = chang_bound(static_cast<double>(row.h), pd, plan.kappa, degree);
      row.bound = b.value;
      row.flagged = b.flagged;
      row.extra = {static_cast<double>(u), static_cast<double>(t), static_cast<double>(degree)};
      break;
    }
    case SweepTarget::Wooley: {
      const std::uint64_t u = random_u(row.h);
      const auto degree = static_cast<unsigned>(rng.uniform(3, plan.max_degree));
      const auto f = random_poly(rng, p, degree);
      row.exact = std::abs(exp_sum(ctx, f, u, row.h));
      const double hd = static_cast<double>(row.h);
      row.bound = wooley_bound(hd, pd, degree);
      row.flagged = !(hd < pd);
      row.extra = {static_cast<double>(u), static_cast<double>(degree), wooley_short_bound(hd, degree),
                   wooley_short_in_range(hd, pd, degree) ? 1.0 : 0.0};
      break;
    }
    case SweepTarget::Acz: {
      if (plan.h_jitter > 0) {
        const double factor = 1.0 + plan.h_jitter * (2.0 * rng.unit() - 1.0);
        const auto jittered = static_cast<std::int64_t>(std::llround(static_cast<double>(h_nominal) * factor));
        row.h = static_cast<std::uint64_t>(std::clamp<std::int64_t>(jittered, 1, p - 1));
      }
      const std::uint64_t u = random_u(row.h);
      const double hd = static_cast<double>(row.h);
      const auto count = acz_quadruple_count(ctx, u, row.h);
      row.exact = static_cast<double>(count);
      row.bound = acz_bound(hd, pd, plan.slack_eps, plan.slack_c);
      row.extra = {static_cast<double>(u), 2.0 * hd * hd - hd, (row.exact - hd * hd * hd * hd / pd) / (hd * hd)};
      break;
    }
    case SweepTarget::Theorem: {
      SystemSpec sys;
      sys.n = plan.n;
      sys.s = plan.s;
      sys.paper_regime = plan.paper_regime;
      sys.a = static_cast<Residue>(rng.uniform(1, p - 1));
      for (unsigned j = 0; j < sys.s; ++j) sys.b.push_back(static_cast<Residue>(rng.uniform(0, p - 1)));
      sys.c.assign(sys.n, {});
      sys.k.assign(sys.n, {});
      for (unsigned i = 0; i < sys.n; ++i) {
        for (unsigned j = 0; j < sys.s; ++j) sys.c[i].push_back(static_cast<Residue>(rng.uniform(1, p - 1)));
        if (plan.paper_regime) {
          // s distinct exponents from [k_lo, k_hi], sorted: a uniform increasing tuple.
          std::vector<std::uint64_t> pool(plan.k_hi - plan.k_lo + 1);
          std::iota(pool.begin(), pool.end(), plan.k_lo);
          for (unsigned j = 0; j < sys.s; ++j) {
            std::swap(pool[j], pool[rng.uniform(j, pool.size() - 1)]);
          }
          sys.k[i].assign(pool.begin(), pool.begin() + sys.s);
          std::sort(sys.k[i].begin(), sys.k[i].end());
        } else {
          for (unsigned j = 0; j < sys.s; ++j) sys.k[i].push_back(rng.uniform(plan.k_lo, plan.k_hi));
        }
      }
      BoxSpec box;
      for (unsigned i = 0; i < sys.n; ++i) box.u.push_back(random_u(row.h));
      box.h = row.h;

      CountOptions opts;
      opts.batch = plan.batch;
      const auto result = count_spectral(ctx, sys, box, opts);
      const auto density = predicted_density(sys, box, p);
      const double count = static_cast<double>(result.count);
      row.exact = std::abs(count - density.theorem_main);
      const auto params = BoundParams::from_system(sys, box, p, plan.kappa);
      const auto b = theorem_error_bound(params);
      row.bound = b.value;
      row.flagged = b.flagged;
      const double e = eta(plan.kappa, params.k_max);
      row.extra = {static_cast<double>(sys.a), count, density.theorem_main,
                   std::abs(count / density.theorem_main - 1.0), static_cast<double>(params.k_min),
                   static_cast<double>(params.k_max), e, density_threshold(sys.s, e)};
      row.n = sys.n;
      row.s = sys.s;
      break;
    }
    case SweepTarget::Weil: {
      const std::uint64_t u = random_u(row.h);
      const std::uint64_t t = rng.uniform(1, p - 2);
      const auto g_degree = static_cast<unsigned>(rng.uniform(1, std::min<std::uint64_t>(3, p - 1)));
      const auto g = random_squarefree(rng, p, g_degree);
      const auto f_degree = static_cast<unsigned>(rng.uniform(1, plan.max_degree));
      const auto f = random_poly(rng, p, f_degree);
      row.exact = std::abs(mixed_char_sum(ctx, t, g, f, u, row.h));
      row.bound = weil_bound(pd);
      row.extra = {static_cast<double>(u), static_cast<double>(t), static_cast<double>(g_degree),
                   static_cast<double>(f_degree)};
      break;
    }
  }
  row.ratio = row.exact / row.bound;
  return row;
}

}  // namespace

SweepReport run_sweep(const SweepPlan& plan) {
  check_plan(plan);

  std::map<std::uint64_t, FieldCtx> contexts;
  std::vector<std::uint64_t> nominal_h(plan.grid.size());
  for (std::size_t g = 0; g < plan.grid.size(); ++g) {
    const auto& gp = plan.grid[g];
    if (!contexts.contains(gp.p)) contexts.emplace(gp.p, build_field_ctx(gp.p));
    nominal_h[g] = gp.resolve_h();
  }

  std::vector<RowJob> jobs;
  for (std::size_t g = 0; g < plan.grid.size(); ++g) {
    for (unsigned i = 0; i < plan.instances; ++i) jobs.push_back({g, i});
  }

  SweepReport report;
  report.target = plan.target;
  report.extra_columns = extra_columns_for(plan.target);
  report.rows.resize(jobs.size());
  parallel_for(jobs.size(), plan.workers, [&](std::size_t j) {
    const auto& job = jobs[j];
    const auto& gp = plan.grid[job.grid_index];
    report.rows[j] = evaluate_row(plan, contexts.at(gp.p), nominal_h[job.grid_index],
                                  derive_seed(plan.seed, job.grid_index, job.instance));
  });
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const SweepRow& x, const SweepRow& y) { return std::tie(x.p, x.h) < std::tie(y.p, y.h); });

  // Summary over unflagged rows.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.max_ratio = nan;
  std::vector<std::pair<double, double>> points;
  for (const auto& row : report.rows) {
    if (row.flagged) {
      ++report.flagged_rows;
      continue;
    }
    if (std::isnan(report.max_ratio) || row.ratio > report.max_ratio) report.max_ratio = row.ratio;
    if (row.ratio > 0 && std::isfinite(row.ratio)) {
      points.emplace_back(std::log(static_cast<double>(row.p)), std::log(row.ratio));
    }
  }
  report.trend_slope = nan;
  if (!points.empty()) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : points) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double sxx = 0, sxy = 0;
    for (const auto& [x, y] : points) {
      sxx += (x - mx) * (x - mx);
      sxy += (x - mx) * (y - my);
    }
    if (sxx > 0) report.trend_slope = sxy / sxx;
  }
  return report;
}

}  // namespace congbox
