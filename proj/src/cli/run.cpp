#include <fstream>
#include <map>
#include <ostream>

#include "CLI11.hpp"

#include "congbox/cli.hpp"
#include "congbox/error.hpp"

namespace congbox::cli {

namespace {

void add_output_options(CLI::App& sub, RunConfig& cfg) {
  static const std::map<std::string, Format> formats{
      {"pretty", Format::Pretty}, {"csv", Format::Csv}, {"json", Format::Json}};
  sub.add_option("--out", cfg.out, "Write the report to this file instead of stdout");
  sub.add_option("--format", cfg.format, "Report format: pretty, csv or json")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

void add_batch_option(CLI::App& sub, RunConfig& cfg) {
  static const std::map<std::string, BatchMethod> batches{{"direct", BatchMethod::Direct},
                                                          {"dft", BatchMethod::Dft}};
  sub.add_option("--batch", cfg.batch, "All-character sums: direct O((p-1)h) or dft (length p-1 transform)")
      ->transform(CLI::CheckedTransformer(batches, CLI::ignore_case));
}

void add_instance_options(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--p", cfg.p, "Odd prime modulus")->required();
  sub.add_option("--n", cfg.n, "Number of variables");
  sub.add_option("--s", cfg.s, "Number of diagonal congruences");
  sub.add_option("--a", cfg.a, "Target of the product congruence");
  sub.add_option("--b", cfg.b, "Diagonal targets b_1,...,b_s");
  sub.add_option("--c", cfg.c, "Coefficients: one value, one row 'c1,..,cs', or n rows separated by ';'");
  sub.add_option("--k", cfg.k, "Exponents, same layout as --c");
  sub.add_option("--u", cfg.u, "Interval starts u_1,...,u_n (one value is broadcast)");
  sub.add_option("--h", cfg.h, "Box side length")->required();
  sub.add_option("--m", cfg.m, "Product form x_i^{m_i}: m_1,...,m_n (one value is broadcast)");
  sub.add_option("--G", cfg.g, "Product form G_i(x_i): coefficient lists, low degree first, separated by ';'");
  sub.add_flag("--paper-regime", cfg.paper_regime, "Reject exponents outside 3 <= k_i1 < ... < k_is");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag) {
  RunConfig cfg;
  CLI::App app{"congbox: exact box counts for product and diagonal congruences modulo a prime"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_version_flag("--version", kVersion);
  app.set_config("--config", "", "Key-value configuration file; command-line flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  static const std::map<std::string, Method> methods{
      {"auto", Method::Auto}, {"brute", Method::Brute}, {"spectral", Method::Spectral}, {"both", Method::Both}};

  auto* count = app.add_subcommand("count", "Count solutions in a box");
  add_instance_options(*count, cfg);
  count->add_option("--method", cfg.method, "brute, spectral, both or auto")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case));
  count->add_option("--brute-cap", cfg.brute_cap, "Maximum h^n evaluations for brute force");
  count->add_option("--cost-cap", cfg.cost_cap, "Maximum p^s (p-1) n h term operations for the spectral count");
  count->add_flag("--force", cfg.force, "Ignore the size and cost caps");
  count->add_option("--workers", cfg.workers, "Worker threads");
  count->add_option("--seed", cfg.seed, "Echoed into the report");
  add_batch_option(*count, cfg);
  add_output_options(*count, cfg);

  auto* verify = app.add_subcommand("verify", "Run the randomized property battery");
  verify->add_option("--seed", cfg.seed, "Battery seed");
  verify->add_option("--battery", cfg.battery, "Number of random brute-force/spectral comparisons");
  verify->add_flag("--inject-fault", cfg.inject_fault, "Test hook: corrupt one discrete-log entry");
  verify->add_option("--workers", cfg.workers, "Worker threads");
  add_output_options(*verify, cfg);

  auto* sweep = app.add_subcommand("sweep", "Compare exact quantities with bound shapes over a grid");
  sweep->add_option("--target", cfg.target, "chang, wooley, acz, theorem or weil")->required();
  sweep->add_option("--grid", cfg.grid, "Grid entries P:H or P:p^X, comma separated")->required();
  sweep->add_option("--instances", cfg.instances, "Random instances per grid point");
  sweep->add_option("--seed", cfg.seed, "Sweep seed");
  sweep->add_option("--kappa", cfg.kappa, "kappa > 0");
  sweep->add_option("--K,--max-degree", cfg.max_degree, "Maximum phase-polynomial degree");
  sweep->add_option("--n", cfg.n, "Variables (theorem target)");
  sweep->add_option("--s", cfg.s, "Diagonal congruences (theorem target)");
  sweep->add_option("--k-lo", cfg.k_lo, "Smallest generated exponent");
  sweep->add_option("--k-hi", cfg.k_hi, "Largest generated exponent");
  sweep->add_flag("--paper-regime", cfg.paper_regime, "Generate strictly increasing exponents >= 3");
  sweep->add_option("--slack-eps", cfg.slack_eps, "acz: exponent standing in for p^{o(1)}");
  sweep->add_option("--slack-c", cfg.slack_c, "acz: constant in front of the slack term");
  sweep->add_option("--h-jitter", cfg.h_jitter, "acz: relative jitter applied to h");
  sweep->add_option("--workers", cfg.workers, "Worker threads");
  add_batch_option(*sweep, cfg);
  add_output_options(*sweep, cfg);

  auto* moments = app.add_subcommand("moments", "Fourth moment of short character sums vs quadruple counts");
  moments->add_option("--p", cfg.p, "Odd prime modulus")->required();
  moments->add_option("--u", cfg.u, "Interval start");
  moments->add_option("--h", cfg.h, "Interval length")->required();
  moments->add_option("--rho", cfg.rho, "Weights: ones or random");
  moments->add_option("--seed", cfg.seed, "Seed for random weights");
  add_batch_option(*moments, cfg);
  add_output_options(*moments, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, diag);
    return code == 0 ? kExitOk : kExitConfig;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  auto open_sink = [&] {
    if (cfg.out.empty()) return;
    file.open(cfg.out, std::ios::binary);
    if (!file) throw InvalidInput("cannot open output file '" + cfg.out + "'");
    sink = &file;
  };

  try {
    if (count->parsed()) {
      cfg.command = "count";
      open_sink();
      return cmd_count(cfg, *sink, diag);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      open_sink();
      return cmd_verify(cfg, *sink, diag);
    }
    if (sweep->parsed()) {
      cfg.command = "sweep";
      open_sink();
      return cmd_sweep(cfg, *sink, diag);
    }
    if (moments->parsed()) {
      cfg.command = "moments";
      open_sink();
      return cmd_moments(cfg, *sink, diag);
    }
  } catch (const Error& e) {
    diag << "error: " << e.name() << ": " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Validation:
        return kExitConfig;
      case ErrorKind::Guard:
        return kExitGuard;
      case ErrorKind::Numerical:
        return kExitFailure;
    }
  } catch (const std::exception& e) {
    diag << "error: Internal: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}

}  // namespace congbox::cli
