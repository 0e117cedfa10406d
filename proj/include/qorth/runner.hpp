#pragma once

// Command implementations behind the qorth executable. Each takes a parsed
// configuration and returns the rendered output plus an exit status, so the
// commands can be driven without a process boundary.

#include <optional>
#include <string>
#include <vector>

namespace qorth {

struct RunConfig {
  std::string command;  // eval | gram | verify | sweep

  std::string q = "0.5";
  std::string s;       // explicit s for C / D / dual-base
  std::string s_mode;  // qinv | q, alternative to s
  std::string a;       // defaults to q
  std::string parity = "even";
  std::string family;  // h | htilde | C | D; eval defaults to h, gram to the measure's own
  std::string measure = "hermite-extremal";

  unsigned n = 0;
  std::optional<std::string> x, phi, mu;

  unsigned N = 8;
  unsigned k_max = 6;
  unsigned bits = 256;
  long tol_exp = 200;
  unsigned threads = 0;

  std::string output;  // json | csv | pretty; empty: the command's default
  std::optional<std::string> out_path;

  std::string a_from = "q";
  std::string a_to = "0.95";
  unsigned steps = 10;

  bool list = false;
  std::vector<std::string> only;
  std::vector<std::string> skip;
};

struct RunResult {
  int exit_code = 0;
  std::string text;
};

/// Exit codes: 0 success, 1 a check failed, 2 usage or precondition error,
/// 3 numerical failure (truncation, pole, degenerate recurrence).
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

RunResult cmd_eval(const RunConfig& config);
RunResult cmd_gram(const RunConfig& config);
RunResult cmd_verify(const RunConfig& config);
RunResult cmd_sweep(const RunConfig& config);

/// Dispatches on config.command and maps library errors to exit codes with
/// a one-line diagnostic.
RunResult run(const RunConfig& config);

}  // namespace qorth
