#include <chrono>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "congbox/bounds.hpp"
#include "congbox/cli.hpp"
#include "congbox/error.hpp"
#include "congbox/rng.hpp"
#include "congbox/sums.hpp"

namespace congbox::cli {

namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Auto:
      return "auto";
    case Method::Brute:
      return "brute";
    case Method::Spectral:
      return "spectral";
    case Method::Both:
      return "both";
  }
  return "?";
}

std::string batch_name(BatchMethod b) { return b == BatchMethod::Dft ? "dft" : "direct"; }

Format resolve_format(const RunConfig& config, Format fallback) {
  return config.format == Format::Auto ? fallback : config.format;
}

// Scalar rendering for the text formats: integers exactly, doubles with 17
// significant digits, arrays and objects as compact JSON.
std::string render_scalar(const ojson& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_null()) return "nan";
  return v.dump();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_header_comments(std::ostream& out, const RunConfig& config, const ojson& resolved) {
  out << "# congbox " << kVersion << ' ' << config.command << '\n';
  out << "# seed: " << config.seed << '\n';
  out << "# config: " << resolved.dump() << '\n';
}

// Emits a flat record (count, moments) in the requested format.
void emit_record(std::ostream& out, std::ostream& diag, const RunConfig& config, Format format,
                 const ojson& resolved, const ojson& record, double wall_seconds) {
  switch (format) {
    case Format::Json: {
      ojson doc;
      doc["tool"] = "congbox";
      doc["version"] = kVersion;
      doc["command"] = config.command;
      doc["seed"] = config.seed;
      doc["config"] = resolved;
      doc["result"] = record;
      doc["wall_seconds"] = wall_seconds;
      out << doc.dump(2) << '\n';
      break;
    }
    case Format::Csv: {
      write_header_comments(out, config, resolved);
      bool first = true;
      for (const auto& [key, v] : record.items()) {
        out << (first ? "" : ",") << key;
        first = false;
      }
      out << '\n';
      first = true;
      for (const auto& [key, v] : record.items()) {
        out << (first ? "" : ",") << csv_escape(render_scalar(v));
        first = false;
      }
      out << '\n';
      diag << "# wall_seconds: " << format_double(wall_seconds) << '\n';
      break;
    }
    default: {
      write_header_comments(out, config, resolved);
      std::size_t width = 0;
      for (const auto& [key, v] : record.items()) width = std::max(width, key.size());
      for (const auto& [key, v] : record.items()) {
        out << std::left << std::setw(static_cast<int>(width)) << key << " = " << render_scalar(v) << '\n';
      }
      out << "# wall_seconds: " << format_double(wall_seconds) << '\n';
      break;
    }
  }
}

ojson poly_json(const ProductFactor& f) {
  switch (f.kind) {
    case ProductFactor::Kind::Identity:
      return "X";
    case ProductFactor::Kind::Power:
      return "X^" + std::to_string(f.m);
    case ProductFactor::Kind::Polynomial:
      return f.poly.coeffs;
  }
  return nullptr;
}

ojson instance_json(const RunConfig& config, const Instance& inst, Residue p) {
  const auto& sys = inst.system;
  ojson j;
  j["p"] = p;
  j["n"] = sys.n;
  j["s"] = sys.s;
  j["a"] = sys.a;
  j["b"] = sys.b;
  j["c"] = sys.c;
  j["k"] = sys.k;
  j["u"] = inst.box.u;
  j["h"] = inst.box.h;
  ojson form = ojson::array();
  for (unsigned i = 0; i < sys.n; ++i) form.push_back(poly_json(sys.factor(i)));
  j["product_form"] = form;
  j["paper_regime"] = sys.paper_regime;
  j["method"] = method_name(config.method);
  j["batch"] = batch_name(config.batch);
  j["brute_cap"] = config.brute_cap;
  j["cost_cap"] = config.cost_cap;
  j["force"] = config.force;
  j["workers"] = config.workers;
  return j;
}

ojson complex_json(cplx z) { return ojson::array({z.real(), z.imag()}); }

}  // namespace

int cmd_count(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const auto start = Clock::now();
  const auto ctx = build_field_ctx(config.p);
  const auto inst = build_instance(config, ctx.p());
  const auto warnings = validate_system(ctx, inst.system);
  validate_box(ctx, inst.box, inst.system.n);

  CountOptions opts;
  opts.brute_cap = config.brute_cap;
  opts.cost_cap = config.cost_cap;
  opts.force = config.force;
  opts.batch = config.batch;
  opts.workers = config.workers;

  Method method = config.method;
  if (method == Method::Auto) {
    const double evals = std::pow(static_cast<double>(inst.box.h), inst.system.n);
    method = evals <= static_cast<double>(config.brute_cap) ? Method::Brute : Method::Spectral;
  }

  const auto density = predicted_density(inst.system, inst.box, ctx.p());
  ojson record;
  record["method"] = method_name(method);
  std::optional<std::uint64_t> brute;
  std::optional<CountResult> spectral;
  if (method == Method::Brute || method == Method::Both) brute = count_bruteforce(ctx, inst.system, inst.box, opts);
  if (method == Method::Spectral || method == Method::Both) spectral = count_spectral(ctx, inst.system, inst.box, opts);

  record["count"] = spectral ? spectral->count : *brute;
  if (brute) record["count_brute"] = *brute;
  if (spectral) record["count_spectral"] = spectral->count;
  record["main_term_theorem"] = density.theorem_main;
  record["main_term_separated"] = density.separated_main;
  if (spectral) {
    record["main_term"] = spectral->main_term;
    record["r1"] = complex_json(spectral->r1);
    record["r2"] = complex_json(spectral->r2);
    record["residual"] = spectral->residual;
    record["error_bound"] = spectral->error_bound;
    record["compensated"] = spectral->compensated;
  }
  ojson warn = ojson::array();
  for (const auto& w : warnings) warn.push_back(w);
  record["warnings"] = warn;

  int status = kExitOk;
  if (brute && spectral) {
    const bool match = *brute == spectral->count;
    record["match"] = match;
    if (!match) {
      diag << "error: OracleMismatch: brute force " << *brute << " != spectral " << spectral->count << '\n';
      status = kExitFailure;
    }
  }
  emit_record(out, diag, config, resolve_format(config, Format::Pretty), instance_json(config, inst, ctx.p()), record,
              seconds_since(start));
  return status;
}

int cmd_moments(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const auto start = Clock::now();
  const auto ctx = build_field_ctx(config.p);
  const auto us = parse_list(config.u.empty() ? "0" : config.u);
  if (us.size() != 1 || us[0] < 0) throw InvalidInput("moments takes a single nonnegative u");
  const auto u = static_cast<std::uint64_t>(us[0]);
  validate_interval(ctx, u, config.h);

  IntervalWeights wts;
  if (config.rho == "ones") {
    wts = IntervalWeights::ones(u, config.h);
  } else if (config.rho == "random") {
    Rng rng(derive_seed(config.seed, 0x6d6f6d));
    wts = IntervalWeights{u, config.h, {}};
    for (std::uint64_t k = 0; k < config.h; ++k) {
      const double r = std::sqrt(rng.unit());
      wts.w.push_back(std::polar(r, 2.0 * std::numbers::pi * rng.unit()));
    }
  } else {
    throw InvalidInput("rho must be 'ones' or 'random'");
  }

  const double moment = fourth_moment(ctx, wts, {config.batch, nullptr});
  const double weighted = weighted_quadruple_sum(ctx, wts);
  const auto count = acz_quadruple_count(ctx, u, config.h);
  const double expect = static_cast<double>(ctx.order()) * weighted;
  const double rel_err = std::abs(moment - expect) / std::max(1.0, expect);

  ojson record;
  record["fourth_moment"] = moment;
  record["weighted_quadruple_sum"] = weighted;
  record["quadruple_count"] = count;
  record["identity_ratio"] = weighted > 0 ? moment / weighted : std::nan("");
  record["p_minus_1"] = ctx.order();
  record["relative_error"] = rel_err;
  record["identity_holds"] = rel_err <= 1e-6;

  ojson resolved;
  resolved["p"] = ctx.p();
  resolved["u"] = u;
  resolved["h"] = config.h;
  resolved["rho"] = config.rho;
  resolved["batch"] = batch_name(config.batch);
  emit_record(out, diag, config, resolve_format(config, Format::Pretty), resolved, record, seconds_since(start));
  if (rel_err > 1e-6) {
    diag << "error: FourthMomentIdentity: relative error " << format_double(rel_err) << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const auto start = Clock::now();
  const auto results = run_verify_battery(config.seed, config.battery, config.inject_fault);
  bool all = true;
  ojson record;
  for (const auto& r : results) {
    record[r.name] = r.passed;
    all = all && r.passed;
    if (!r.passed) diag << "error: PropertyFailed: " << r.name << ": " << r.detail << '\n';
  }
  record["all_passed"] = all;

  ojson resolved;
  resolved["seed"] = config.seed;
  resolved["battery"] = config.battery;
  resolved["inject_fault"] = config.inject_fault;
  const Format format = resolve_format(config, Format::Pretty);
  if (format == Format::Pretty) {
    write_header_comments(out, config, resolved);
    for (const auto& r : results) out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    out << (all ? "all properties hold" : "verification FAILED") << '\n';
    out << "# wall_seconds: " << format_double(seconds_since(start)) << '\n';
  } else {
    emit_record(out, diag, config, format, resolved, record, seconds_since(start));
  }
  return all ? kExitOk : kExitFailure;
}

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& diag) {
  const auto start = Clock::now();
  const auto plan = build_sweep_plan(config);
  const auto report = run_sweep(plan);

  ojson resolved;
  resolved["target"] = std::string(target_name(plan.target));
  ojson grid = ojson::array();
  for (const auto& gp : plan.grid) grid.push_back(gp.describe());
  resolved["grid"] = grid;
  resolved["instances"] = plan.instances;
  resolved["seed"] = plan.seed;
  resolved["kappa"] = plan.kappa;
  resolved["K"] = plan.max_degree;
  resolved["n"] = plan.n;
  resolved["s"] = plan.s;
  resolved["k_lo"] = plan.k_lo;
  resolved["k_hi"] = plan.k_hi;
  resolved["paper_regime"] = plan.paper_regime;
  resolved["slack_eps"] = plan.slack_eps;
  resolved["slack_c"] = plan.slack_c;
  resolved["h_jitter"] = plan.h_jitter;
  resolved["batch"] = batch_name(plan.batch);

  const std::vector<std::string> base = {"target", "p", "h", "n", "s", "seed", "exact", "bound", "ratio", "flagged"};
  auto row_cells = [&](const SweepRow& row) {
    std::vector<std::string> cells = {std::string(target_name(report.target)),
                                      std::to_string(row.p),
                                      std::to_string(row.h),
                                      std::to_string(row.n),
                                      std::to_string(row.s),
                                      std::to_string(row.seed),
                                      format_double(row.exact),
                                      format_double(row.bound),
                                      format_double(row.ratio),
                                      row.flagged ? "1" : "0"};
    for (double v : row.extra) cells.push_back(format_double(v));
    return cells;
  };
  std::vector<std::string> columns = base;
  columns.insert(columns.end(), report.extra_columns.begin(), report.extra_columns.end());

  const Format format = resolve_format(config, Format::Csv);
  const double wall = seconds_since(start);
  if (format == Format::Json) {
    ojson doc;
    doc["tool"] = "congbox";
    doc["version"] = kVersion;
    doc["command"] = config.command;
    doc["seed"] = config.seed;
    doc["config"] = resolved;
    doc["summary"] = {{"rows", report.rows.size()},
                      {"flagged_rows", report.flagged_rows},
                      {"max_ratio", report.max_ratio},
                      {"trend_slope", report.trend_slope}};
    doc["columns"] = columns;
    ojson rows = ojson::array();
    for (const auto& row : report.rows) {
      ojson r;
      r["target"] = std::string(target_name(report.target));
      r["p"] = row.p;
      r["h"] = row.h;
      r["n"] = row.n;
      r["s"] = row.s;
      r["seed"] = row.seed;
      r["exact"] = row.exact;
      r["bound"] = row.bound;
      r["ratio"] = row.ratio;
      r["flagged"] = row.flagged ? 1 : 0;
      for (std::size_t i = 0; i < row.extra.size(); ++i) r[report.extra_columns[i]] = row.extra[i];
      rows.push_back(r);
    }
    doc["rows"] = rows;
    doc["wall_seconds"] = wall;
    out << doc.dump(2) << '\n';
    return kExitOk;
  }

  write_header_comments(out, config, resolved);
  out << "# summary: rows=" << report.rows.size() << " flagged_rows=" << report.flagged_rows
      << " max_ratio=" << format_double(report.max_ratio) << " trend_slope=" << format_double(report.trend_slope)
      << '\n';
  if (format == Format::Csv) {
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : report.rows) {
      const auto cells = row_cells(row);
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    }
    diag << "# wall_seconds: " << format_double(wall) << '\n';
    return kExitOk;
  }

  // Pretty: aligned table.
  std::vector<std::vector<std::string>> table{columns};
  for (const auto& row : report.rows) table.push_back(row_cells(row));
  std::vector<std::size_t> width(columns.size(), 0);
  for (const auto& r : table) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : table) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
    }
    out << '\n';
  }
  out << "# wall_seconds: " << format_double(wall) << '\n';
  return kExitOk;
}

}  // namespace congbox::cli
