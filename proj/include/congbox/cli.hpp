#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "congbox/counting.hpp"
#include "congbox/sweep.hpp"

namespace congbox::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit status contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // verification or assertion failure
inline constexpr int kExitConfig = 2;   // configuration error
inline constexpr int kExitGuard = 3;    // resource guard tripped

enum class Format { Auto, Pretty, Csv, Json };
enum class Method { Auto, Brute, Spectral, Both };

/// Everything a subcommand needs, as parsed from flags and the config file.
/// Residues are kept as given here and reduced mod p when the instance is built.
struct RunConfig {
  std::string command;

  // instance
  std::uint64_t p = 0;
  unsigned n = 3;
  unsigned s = 0;
  std::int64_t a = 1;
  std::string b;  // "b1,b2,..."
  std::string c;  // "row;row;..." with comma-separated rows, or one row / one value broadcast
  std::string k;
  std::string u;  // "u1,...,un" or one value broadcast
  std::uint64_t h = 0;
  std::string m;  // product form x_i^{m_i}: "m1,...,mn" or one value
  std::string g;  // product form G_i: "c0,c1,..;..." low degree first, or one polynomial
  bool paper_regime = false;

  Method method = Method::Auto;
  BatchMethod batch = BatchMethod::Direct;
  bool force = false;
  std::uint64_t brute_cap = 1'000'000'000;
  double cost_cap = 1e10;
  unsigned workers = 1;
  std::uint64_t seed = 1;

  // sweep
  std::string target;
  std::string grid;
  unsigned instances = 10;
  double kappa = 0.25;
  unsigned max_degree = 5;
  unsigned k_lo = 3;
  unsigned k_hi = 5;
  double slack_eps = 0.1;
  double slack_c = 1.0;
  double h_jitter = 0.0;

  // moments
  std::string rho = "ones";

  // verify
  unsigned battery = 50;
  bool inject_fault = false;

  std::string out;  // empty: stdout
  Format format = Format::Auto;
};

/// Instance resolved against a field: reduced residues, broadcast matrices.
struct Instance {
  SystemSpec system;
  BoxSpec box;
};

Instance build_instance(const RunConfig& config, Residue p);
SweepPlan build_sweep_plan(const RunConfig& config);

/// Parses "1,2,3" into integers. Throws InvalidInput.
std::vector<std::int64_t> parse_list(const std::string& text);
/// Parses "1,2;3,4" into rows. Throws InvalidInput.
std::vector<std::vector<std::int64_t>> parse_matrix(const std::string& text);

/// %.17g, with "nan"/"inf" spelled out.
std::string format_double(double v);

/// Subcommands. Each writes its report to `out` and diagnostics to `diag`,
/// and returns the exit status. Library errors propagate as exceptions.
int cmd_count(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& diag);
int cmd_moments(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// One named property checked by the verification battery.
struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Orthogonality, Parseval, the fourth-moment identity, transform agreement
/// and brute-force/spectral equivalence on `battery` random small systems.
/// With `inject_fault` every field context has one discrete-log entry corrupted.
std::vector<PropertyResult> run_verify_battery(std::uint64_t seed, unsigned battery, bool inject_fault);

/// Full command line: parse flags (and --config file), dispatch, map errors to
/// exit codes, and print "error: <Name>: <message>" on `diag` for failures.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& diag);

}  // namespace congbox::cli
