// qorth: evaluate q-orthogonal polynomial families, assemble Gram matrices
// against their discrete measures, and run the identity suite.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qorth/runner.hpp"

int main(int argc, char** argv) {
  qorth::RunConfig c;
  CLI::App app{"Configurable-precision q-orthogonal polynomial toolkit"};
  app.set_config("--config", "", "TOML/INI file with the same keys as the flags");
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--q", c.q, "base, 0<q<1")->capture_default_str();
  app.add_option("--s", c.s, "family parameter s for C, D and dual-base");
  app.add_option("--s-mode", c.s_mode, "shorthand for s: qinv (s=1/q) or q (s=q)");
  app.add_option("--a", c.a, "extremal measure parameter, q<=a<1 (default q)");
  app.add_option("--parity", c.parity, "dual-base support: even or odd")->capture_default_str();
  app.add_option("--family", c.family, "h, htilde, C or D");
  app.add_option("--measure", c.measure,
                 "hermite-extremal, dual-base, dual-qinv-extremal, dual-q-extremal")
      ->capture_default_str();
  app.add_option("--n", c.n, "degree for eval")->capture_default_str();
  app.add_option("--x", c.x, "evaluation point (grid label for D)");
  app.add_option("--phi", c.phi, "evaluate at x = sinh(phi)");
  app.add_option("--mu", c.mu, "evaluate D at this value of mu");
  app.add_option("--N", c.N, "largest degree in a Gram matrix")->capture_default_str();
  app.add_option("--k-max", c.k_max, "largest index in the identity checks")->capture_default_str();
  app.add_option("--bits", c.bits, "working precision in bits")
      ->envname("QORTH_BITS")
      ->capture_default_str();
  app.add_option("--tol-exp", c.tol_exp, "tolerance 2^-tol_exp")
      ->envname("QORTH_TOL_EXP")
      ->capture_default_str();
  app.add_option("--threads", c.threads, "Gram workers (0: all cores)")->capture_default_str();
  app.add_option("--output", c.output, "json, csv or pretty")
      ->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--out", c.out_path, "write the output to this file");
  app.add_option("--a-from", c.a_from, "sweep start (decimal or q)")->capture_default_str();
  app.add_option("--a-to", c.a_to, "sweep end, below 1")->capture_default_str();
  app.add_option("--steps", c.steps, "sweep points")->capture_default_str();
  app.add_flag("--list", c.list, "verify: print identity ids and exit");
  app.add_option("--only", c.only, "verify: run just these ids");
  app.add_option("--skip", c.skip, "verify: leave these ids out");

  app.add_subcommand("eval", "evaluate one polynomial value")->fallthrough();
  app.add_subcommand("gram", "Gram matrix against a discrete measure")->fallthrough();
  app.add_subcommand("verify", "run the identity suite")->fallthrough();
  app.add_subcommand("sweep", "extremal measures over a range of a")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : qorth::kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();

  const qorth::RunResult result = qorth::run(c);
  if (result.exit_code == qorth::kExitUsage || result.exit_code == qorth::kExitNumeric) {
    std::cerr << result.text;
    return result.exit_code;
  }
  if (c.out_path) {
    std::ofstream file(*c.out_path, std::ios::binary);
    file << result.text;
    if (!file) {
      std::cerr << "error: cannot write " << *c.out_path << "\n";
      return qorth::kExitUsage;
    }
  } else {
    std::cout << result.text;
  }
  return result.exit_code;
}
