#include <sstream>
#include <string>

#include <json.hpp>

#include "qorth/runner.hpp"
#include "support.hpp"

using namespace qorth;

namespace {

RunConfig config(const std::string& command) {
  RunConfig c;
  c.command = command;
  return c;
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char ch : text) n += ch == '\n';
  return n;
}

}  // namespace

TEST_CASE("eval prints the value") {
  RunConfig c = config("eval");
  c.family = "h";
  c.n = 4;
  c.x = "1";
  CHECK(run(c).exit_code == 0);
  CHECK(run(c).text == "-21\n");

  c.n = 2;
  c.x.reset();
  c.phi = "0";
  CHECK(run(c).text == "-1\n");

  RunConfig d = config("eval");
  d.family = "D";
  d.s_mode = "qinv";
  d.n = 1;
  d.mu = "2";
  CHECK(run(d).text == "1\n");

  d.output = "json";
  const auto j = nlohmann::json::parse(run(d).text);
  CHECK(j["value"] == "1");
  CHECK(j["mu"] == "2");
}

TEST_CASE("eval usage errors name the constraint") {
  RunConfig c = config("eval");
  c.q = "1.5";
  c.x = "0";
  auto r = run(c);
  CHECK(r.exit_code == kExitUsage);
  CHECK(r.text.find("0<q<1") != std::string::npos);

  c = config("eval");
  r = run(c);
  CHECK(r.exit_code == kExitUsage);
  CHECK(r.text.find("exactly one of --x, --phi, --mu") != std::string::npos);

  c = config("eval");
  c.family = "htilde";
  c.n = 3;
  c.x = "0.5";
  CHECK(run(c).text.find("n must be even") != std::string::npos);

  c = config("eval");
  c.family = "D";
  c.s = "2";
  c.s_mode = "q";
  c.mu = "1";
  CHECK(run(c).text.find("not both") != std::string::npos);

  c = config("eval");
  c.x = "0";
  c.output = "xml";
  CHECK(run(c).exit_code == kExitUsage);

  CHECK(run(config("frobnicate")).exit_code == kExitUsage);
}

TEST_CASE("eval numerical failures use their own exit code") {
  RunConfig c = config("eval");
  c.family = "C";
  c.s = "4";
  c.n = 3;
  c.x = "3";
  const auto r = run(c);
  CHECK(r.exit_code == kExitNumeric);
  CHECK(r.text.rfind("error: ", 0) == 0);
}

TEST_CASE("gram command") {
  RunConfig c = config("gram");
  c.N = 0;
  c.a = "0.7";
  const auto r = run(c);
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(r.text);
  CHECK(j["N"] == 0);
  CHECK(j["measure"] == "hermite-extremal");
  CHECK(j["pass"] == true);
  CHECK(j["gram"].size() == 1);

  c.N = 3;
  c.measure = "dual-base";
  c.s_mode = "qinv";
  c.parity = "odd";
  c.output = "csv";
  const auto csv = run(c);
  CHECK(csv.exit_code == 0);
  CHECK(line_count(csv.text) == 1 + 16);

  RunConfig bad = config("gram");
  bad.family = "D";
  bad.s = "0.5";
  const auto mismatch = run(bad);
  CHECK(mismatch.exit_code == kExitUsage);
  CHECK(mismatch.text.find("hermite-extremal") != std::string::npos);
}

TEST_CASE("verify command") {
  RunConfig list = config("verify");
  list.list = true;
  CHECK(line_count(run(list).text) == 9);

  RunConfig c = config("verify");
  c.k_max = 3;
  c.only = {"proposition-even", "proposition-odd"};
  const auto ok = run(c);
  CHECK(ok.exit_code == 0);
  CHECK(ok.text.find("all checks passed") != std::string::npos);

  c.only = {"product-identity"};
  const auto red = run(c);
  CHECK(red.exit_code == kExitCheckFailed);
  CHECK(red.text.find("FAIL product-identity") != std::string::npos);

  c.only = {"nope"};
  CHECK(run(c).exit_code == kExitUsage);
}

TEST_CASE("sweep over a") {
  RunConfig c = config("sweep");
  c.N = 3;
  const auto r = run(c);
  CHECK(r.exit_code == 0);
  CHECK(line_count(r.text) == 11);
  std::istringstream in(r.text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "a,off_diag_max,diag_rel_err_max,node_hash");

  c.a_from = "0.3";
  CHECK(run(c).text.find("q<=a-from") != std::string::npos);
}

TEST_CASE("command output is deterministic") {
  RunConfig c = config("gram");
  c.measure = "dual-q-extremal";
  c.a = "0.6";
  c.N = 4;
  c.threads = 1;
  const auto one = run(c).text;
  c.threads = 5;
  CHECK(run(c).text == one);
}
