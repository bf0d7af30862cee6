#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "congbox/cli.hpp"
#include "congbox/counting.hpp"
#include "congbox/error.hpp"
#include "congbox/rng.hpp"
#include "congbox/sums.hpp"

namespace congbox::cli {

namespace {

constexpr Residue kFieldPrimes[] = {7, 13, 101, 1009};

cplx random_disk_point(Rng& rng) {
  const double r = std::sqrt(rng.unit());
  return std::polar(r, 2.0 * std::numbers::pi * rng.unit());
}

// Runs `check`, turning exceptions into failures.
PropertyResult guarded(std::string name, const std::function<std::string()>& check) {
  PropertyResult r{std::move(name), false, {}};
  try {
    r.detail = check();
    r.passed = r.detail.empty();
    if (r.passed) r.detail = "ok";
  } catch (const Error& e) {
    r.detail = e.name() + ": " + e.what();
  } catch (const std::exception& e) {
    r.detail = e.what();
  }
  return r;
}

}  // namespace

std::vector<PropertyResult> run_verify_battery(std::uint64_t seed, unsigned battery, bool inject_fault) {
  if (battery == 0) throw InvalidInput("verification battery size must be positive");

  std::vector<FieldCtx> fields;
  for (Residue p : kFieldPrimes) {
    auto ctx = build_field_ctx(p);
    fields.push_back(inject_fault ? ctx.with_corrupted_log_entry() : std::move(ctx));
  }
  std::vector<PropertyResult> results;

  results.push_back(guarded("discrete-log-table", [&] {
    std::ostringstream os;
    for (const auto& ctx : fields) {
      std::vector<bool> seen(ctx.order(), false);
      for (Residue x = 1; x < ctx.p(); ++x) {
        const Residue j = ctx.ind(x);
        if (mod_pow(ctx.g(), j, ctx.p()) != x || j >= ctx.order() || seen[j]) {
          os << "p=" << ctx.p() << ": g^ind[" << x << "] != " << x << " or ind not a bijection";
          return os.str();
        }
        seen[j] = true;
      }
    }
    return os.str();
  }));

  results.push_back(guarded("multiplicativity", [&] {
    std::ostringstream os;
    Rng rng(derive_seed(seed, 1));
    for (const auto& ctx : fields) {
      for (int trial = 0; trial < 200; ++trial) {
        const auto t = rng.uniform(0, ctx.order() - 1);
        const auto x = static_cast<Residue>(rng.uniform(1, ctx.p() - 1));
        const auto y = static_cast<Residue>(rng.uniform(1, ctx.p() - 1));
        const auto xy = static_cast<Residue>(std::uint64_t{x} * y % ctx.p());
        if (std::abs(mult_char(ctx, t, xy) - mult_char(ctx, t, x) * mult_char(ctx, t, y)) > 1e-12) {
          os << "p=" << ctx.p() << " t=" << t << " x=" << x << " y=" << y;
          return os.str();
        }
      }
    }
    return os.str();
  }));

  results.push_back(guarded("orthogonality", [&] {
    std::ostringstream os;
    for (const auto& ctx : fields) {
      const double tol = 1e-9 * ctx.p();
      const auto ones = IntervalWeights::ones(0, ctx.p() - 1);
      const auto sums = batch_char_sums(ctx, ones);  // sum over x of chi_t(x), all t
      for (std::size_t t = 0; t < sums.size(); ++t) {
        const double expect = t == 0 ? ctx.order() : 0.0;
        if (std::abs(sums[t] - expect) > tol) {
          os << "p=" << ctx.p() << ": sum_x chi_" << t << "(x) = " << format_double(std::abs(sums[t]));
          return os.str();
        }
      }
      for (Residue x : {Residue{1}, Residue{2}, static_cast<Residue>(ctx.p() - 1)}) {
        cplx acc{};
        for (std::uint64_t t = 0; t < ctx.order(); ++t) acc += mult_char(ctx, t, x);
        const double expect = x == 1 ? ctx.order() : 0.0;
        if (std::abs(acc - expect) > tol) {
          os << "p=" << ctx.p() << ": sum_t chi_t(" << x << ") off";
          return os.str();
        }
      }
      for (Residue c : {Residue{1}, static_cast<Residue>(ctx.p() - 1)}) {
        cplx acc{};
        for (std::uint64_t z = 0; z < ctx.p(); ++z) acc += ctx.add_root(static_cast<Residue>(z * c % ctx.p()));
        if (std::abs(acc) > tol) {
          os << "p=" << ctx.p() << ": complete additive sum with c=" << c << " nonzero";
          return os.str();
        }
      }
    }
    return os.str();
  }));

  results.push_back(guarded("parseval", [&] {
    std::ostringstream os;
    Rng rng(derive_seed(seed, 2));
    for (const auto& ctx : fields) {
      const std::uint64_t h = rng.uniform(1, std::min<std::uint64_t>(ctx.p() - 1, 200));
      IntervalWeights wts{rng.uniform(0, ctx.p() - 1 - h), h, {}};
      double mass = 0;
      for (std::uint64_t k = 0; k < h; ++k) {
        wts.w.push_back(random_disk_point(rng));
        mass += std::norm(wts.w.back());
      }
      double energy = 0;
      for (const auto& v : batch_char_sums(ctx, wts)) energy += std::norm(v);
      const double expect = ctx.order() * mass;
      if (std::abs(energy - expect) > 1e-8 * expect) {
        os << "p=" << ctx.p() << ": energy " << format_double(energy) << " vs " << format_double(expect);
        return os.str();
      }
    }
    return os.str();
  }));

  results.push_back(guarded("fourth-moment-identity", [&] {
    std::ostringstream os;
    Rng rng(derive_seed(seed, 3));
    for (const auto& ctx : fields) {
      const std::uint64_t h = rng.uniform(1, std::min<std::uint64_t>(ctx.p() - 1, 60));
      const std::uint64_t u = rng.uniform(0, ctx.p() - 1 - h);
      const auto ones = IntervalWeights::ones(u, h);
      const double m1 = fourth_moment(ctx, ones);
      const double c1 = static_cast<double>(ctx.order()) * static_cast<double>(acz_quadruple_count(ctx, u, h));
      IntervalWeights wts{u, h, {}};
      for (std::uint64_t k = 0; k < h; ++k) wts.w.push_back(random_disk_point(rng));
      const double m2 = fourth_moment(ctx, wts);
      const double c2 = ctx.order() * weighted_quadruple_sum(ctx, wts);
      if (std::abs(m1 - c1) > 1e-6 * c1 || std::abs(m2 - c2) > 1e-6 * std::max(1.0, c2)) {
        os << "p=" << ctx.p() << " u=" << u << " h=" << h << ": moment " << format_double(m1) << " vs "
           << format_double(c1);
        return os.str();
      }
    }
    return os.str();
  }));

  results.push_back(guarded("transform-agreement", [&] {
    std::ostringstream os;
    Rng rng(derive_seed(seed, 4));
    for (const auto& ctx : fields) {
      const std::uint64_t h = rng.uniform(1, ctx.p() - 1);
      IntervalWeights wts{rng.uniform(0, ctx.p() - 1 - h), h, {}};
      for (std::uint64_t k = 0; k < h; ++k) wts.w.push_back(random_disk_point(rng));
      const auto direct = batch_char_sums(ctx, wts);
      const auto dft = batch_char_sums(ctx, wts, {BatchMethod::Dft, nullptr});
      for (std::size_t t = 0; t < direct.size(); ++t) {
        if (std::abs(direct[t] - dft[t]) > 1e-9 * static_cast<double>(h)) {
          os << "p=" << ctx.p() << " t=" << t << ": direct and transform paths disagree";
          return os.str();
        }
        // Spot-check the per-term definition.
        if (t % 97 == 0) {
          cplx ref{};
          for (std::uint64_t k = 0; k < h; ++k) ref += wts.w[k] * mult_char(ctx, t, static_cast<Residue>(wts.u + 1 + k));
          if (std::abs(ref - direct[t]) > 1e-9 * static_cast<double>(h)) {
            os << "p=" << ctx.p() << " t=" << t << ": batch differs from per-term evaluation";
            return os.str();
          }
        }
      }
    }
    return os.str();
  }));

  results.push_back(guarded("oracle-equivalence", [&] {
    std::ostringstream os;
    constexpr Residue primes[] = {7, 11, 13, 17, 19, 23, 29, 31};
    for (unsigned inst = 0; inst < battery; ++inst) {
      Rng rng(derive_seed(seed, 5, inst));
      const Residue p = primes[rng.uniform(0, std::size(primes) - 1)];
      auto ctx = build_field_ctx(p);
      if (inject_fault) ctx = ctx.with_corrupted_log_entry();
      SystemSpec sys;
      sys.n = static_cast<unsigned>(rng.uniform(2, 4));
      sys.s = static_cast<unsigned>(rng.uniform(0, 2));
      sys.a = static_cast<Residue>(rng.uniform(1, p - 1));
      for (unsigned j = 0; j < sys.s; ++j) sys.b.push_back(static_cast<Residue>(rng.uniform(0, p - 1)));
      sys.c.assign(sys.n, {});
      sys.k.assign(sys.n, {});
      for (unsigned i = 0; i < sys.n; ++i) {
        for (unsigned j = 0; j < sys.s; ++j) {
          sys.c[i].push_back(static_cast<Residue>(rng.uniform(1, p - 1)));
          sys.k[i].push_back(rng.uniform(1, 7));
        }
      }
      BoxSpec box;
      box.h = rng.uniform(1, std::min<std::uint64_t>(p - 1, 12));
      for (unsigned i = 0; i < sys.n; ++i) box.u.push_back(rng.uniform(0, p - 1 - box.h));
      const auto brute = count_bruteforce(ctx, sys, box);
      const auto spectral = count_spectral(ctx, sys, box);
      if (brute != spectral.count) {
        os << "instance " << inst << " (p=" << p << ", n=" << sys.n << ", s=" << sys.s << ", h=" << box.h
           << "): brute " << brute << " vs spectral " << spectral.count;
        return os.str();
      }
    }
    return os.str();
  }));

  return results;
}

}  // namespace congbox::cli
