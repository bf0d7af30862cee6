#include <cmath>
#include <cstdio>
#include <sstream>

#include "congbox/cli.hpp"
#include "congbox/error.hpp"

namespace congbox::cli {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

Residue reduce(std::int64_t v, Residue p) {
  const auto m = static_cast<std::int64_t>(p);
  std::int64_t r = v % m;
  if (r < 0) r += m;
  return static_cast<Residue>(r);
}

// Expands a parsed matrix to n rows of s entries: one value fills everything,
// one row is repeated for every variable.
std::vector<std::vector<std::int64_t>> broadcast_matrix(const std::vector<std::vector<std::int64_t>>& m, unsigned n,
                                                        unsigned s, const char* what) {
  std::vector<std::vector<std::int64_t>> out(n);
  if (s == 0) {
    if (!m.empty()) throw InvalidInput(std::string(what) + " given but s = 0");
    return out;
  }
  if (m.size() == 1 && m[0].size() == 1) {
    for (auto& row : out) row.assign(s, m[0][0]);
  } else if (m.size() == 1 && m[0].size() == s) {
    for (auto& row : out) row = m[0];
  } else if (m.size() == n) {
    for (unsigned i = 0; i < n; ++i) {
      if (m[i].size() != s) throw InvalidInput(std::string(what) + " row " + std::to_string(i + 1) + " needs s entries");
      out[i] = m[i];
    }
  } else {
    throw InvalidInput(std::string(what) + " must be one value, one row of s entries, or n rows");
  }
  return out;
}

std::vector<std::int64_t> broadcast_list(const std::vector<std::int64_t>& v, unsigned n, const char* what) {
  if (v.size() == 1) return std::vector<std::int64_t>(n, v[0]);
  if (v.size() != n) throw InvalidInput(std::string(what) + " must have one or n entries");
  return v;
}

}  // namespace

std::vector<std::int64_t> parse_list(const std::string& text) {
  std::vector<std::int64_t> out;
  if (trim(text).empty()) return out;
  for (const auto& piece : split(text, ',')) {
    const auto t = trim(piece);
    std::size_t used = 0;
    try {
      out.push_back(std::stoll(t, &used));
    } catch (const std::logic_error&) {
      used = std::string::npos;
    }
    if (used != t.size() || t.empty()) throw InvalidInput("not an integer list: '" + text + "'");
  }
  return out;
}

std::vector<std::vector<std::int64_t>> parse_matrix(const std::string& text) {
  std::vector<std::vector<std::int64_t>> out;
  if (trim(text).empty()) return out;
  for (const auto& row : split(text, ';')) out.push_back(parse_list(row));
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Instance build_instance(const RunConfig& config, Residue p) {
  Instance inst;
  auto& sys = inst.system;
  sys.n = config.n;
  sys.s = config.s;
  sys.paper_regime = config.paper_regime;
  if (sys.n < 2) throw InvalidInput("n must be at least 2");
  sys.a = reduce(config.a, p);

  const auto b = parse_list(config.b);
  if (b.size() != sys.s) throw InvalidInput("b must have s = " + std::to_string(sys.s) + " entries");
  for (auto v : b) sys.b.push_back(reduce(v, p));

  const auto c = broadcast_matrix(parse_matrix(config.c), sys.n, sys.s, "c");
  const auto k = broadcast_matrix(parse_matrix(config.k), sys.n, sys.s, "k");
  sys.c.resize(sys.n);
  sys.k.resize(sys.n);
  for (unsigned i = 0; i < sys.n; ++i) {
    for (auto v : c[i]) sys.c[i].push_back(reduce(v, p));
    for (auto v : k[i]) {
      if (v < 1) throw InvalidInput("exponents k_ij must be >= 1");
      sys.k[i].push_back(static_cast<std::uint64_t>(v));
    }
  }

  if (!config.m.empty() && !config.g.empty()) throw InvalidInput("give at most one of m and G");
  if (!config.m.empty()) {
    for (auto v : broadcast_list(parse_list(config.m), sys.n, "m")) {
      if (v < 1) throw InvalidInput("m_i must be >= 1");
      sys.product_form.push_back(ProductFactor::power(static_cast<std::uint64_t>(v)));
    }
  } else if (!config.g.empty()) {
    auto polys = parse_matrix(config.g);
    if (polys.size() == 1) polys.assign(sys.n, polys[0]);
    if (polys.size() != sys.n) throw InvalidInput("G must have one or n polynomials");
    for (const auto& coeffs : polys) sys.product_form.push_back(ProductFactor::polynomial(PolyMod::from_integers(coeffs, p)));
  }

  if (config.h == 0) throw InvalidInput("box side h must be >= 1");
  inst.box.h = config.h;
  const auto u = config.u.empty() ? std::vector<std::int64_t>{0} : parse_list(config.u);
  for (auto v : broadcast_list(u, sys.n, "u")) {
    if (v < 0) throw InvalidInput("interval starts u_i must be >= 0");
    inst.box.u.push_back(static_cast<std::uint64_t>(v));
  }
  return inst;
}

SweepPlan build_sweep_plan(const RunConfig& config) {
  if (config.target.empty()) throw InvalidInput("sweep needs --target");
  SweepPlan plan;
  plan.target = parse_target(config.target);
  plan.grid = parse_grid(config.grid);
  plan.instances = config.instances;
  plan.seed = config.seed;
  plan.kappa = config.kappa;
  plan.max_degree = config.max_degree;
  plan.n = config.n;
  plan.s = config.s;
  plan.k_lo = config.k_lo;
  plan.k_hi = config.k_hi;
  plan.paper_regime = config.paper_regime;
  plan.slack_eps = config.slack_eps;
  plan.slack_c = config.slack_c;
  plan.h_jitter = config.h_jitter;
  plan.workers = config.workers;
  plan.batch = config.batch;
  return plan;
}

}  // namespace congbox::cli
