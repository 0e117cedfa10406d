#include <string>

#include "qorth/identities.hpp"
#include "support.hpp"

using namespace qorth;
using qorth::testing::dec;

namespace {

const ResidualComponent& component(const IdentityReport& r, const std::string& prefix) {
  for (const auto& c : r.components) {
    if (c.name.rfind(prefix, 0) == 0) return c;
  }
  FAIL("no component " << prefix << " in " << r.id);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("identity checks pass at 256 bits") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  for (const char* qs : {"0.3", "0.5", "0.7"}) {
    const QParam q(dec(qs, ctx));
    for (const auto& id : identity_ids()) {
      if (id == "product-identity") continue;
      CAPTURE(qs);
      CAPTURE(id);
      const IdentityReport r = run_identity(id, q, ctx);
      CAPTURE(r.note);
      CHECK(r.id == id);
      CHECK_FALSE(r.components.empty());
      CHECK(r.pass);
      CHECK(r.max_residual < QReal::exp2i(-150));
    }
  }
}

TEST_CASE("connection checks report one component per degree") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto grid = default_phi_grid(ctx);
  CHECK(check_proposition_even(4, grid, q, ctx).components.size() == 5);
  CHECK(check_proposition_odd(9, grid, q, ctx).components.size() == 10);
  CHECK(check_proposition_odd(9, grid, q, ctx).pass);
}

TEST_CASE("odd chain rejects the q^(n+1) reading") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto r = check_odd_recurrence_chain(6, default_phi_grid(ctx), q, ctx);
  CHECK(r.pass);
  const auto& alt = component(r, "rescaled D(s=q) recurrence, scale q^(n+1)");
  CHECK(alt.informational);
  CHECK_FALSE(alt.pass);
}

TEST_CASE("product identity: the last link fails, the corrected one holds") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  for (const char* qs : {"0.3", "0.5", "0.9"}) {
    const QParam q(dec(qs, ctx));
    const auto r = check_product_identity(q, ctx);
    CHECK_FALSE(r.pass);
    CHECK(component(r, "(-1;q)").pass);
    CHECK(component(r, "link 1").pass);
    CHECK(component(r, "link 2").pass);
    CHECK_FALSE(component(r, "link 3:").pass);
    CHECK(component(r, "link 3 with constant q/2").pass);
    // residual of the last link is 4/q^2 - 1
    const QReal expect = QReal(4) / (q.value() * q.value()) - QReal(1);
    CHECK(abs(component(r, "link 3:").residual - expect) < QReal::exp2i(-150) * expect);
  }
}

TEST_CASE("a = q equivalence carries the m = 0 double count as information") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto r = check_a_equals_q_equivalence(4, q, ctx);
  CHECK(r.pass);
  const auto& m0 = component(r, "even half lattice with weight 2");
  CHECK(m0.informational);
  CHECK_FALSE(m0.pass);
}

TEST_CASE("normalization adjudication favours the squared argument") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto r = check_extremal_normalization(3, {q.value(), dec("0.8", ctx)}, q, ctx);
  CHECK(r.pass);
  CHECK(r.note.find("(-q/a^2;q)_inf is the correct constant") != std::string::npos);
  CHECK_FALSE(component(r, "D(s=q^-1) diagonal with (-q/a;q), a=0.8").pass);
  CHECK_FALSE(component(r, "alternative D(s=q) weight: nonpositive").pass);
}

TEST_CASE("residuals shrink when the precision doubles") {
  const PrecisionContext ctx(256, 200);
  const PrecisionContext wide(512, 400);
  PrecisionScope scope(ctx);
  for (const char* id : {"proposition-even", "odd-recurrence-chain", "extremal-transfer"}) {
    CAPTURE(id);
    const auto lo = run_identity(id, QParam(dec("0.5", ctx)), ctx);
    const auto hi = run_identity(id, QParam(dec("0.5", wide)), wide);
    REQUIRE(lo.pass);
    REQUIRE(hi.pass);
    CHECK(hi.max_residual < QReal::exp2i(-400));
    CHECK(hi.max_residual <= lo.max_residual);
  }
}

TEST_CASE("suite selection and determinism") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  SuiteOptions opts;
  opts.only = {"proposition-even", "product-identity", "h-H-connection"};
  opts.skip = {"product-identity"};
  const auto first = run_suite(q, ctx, opts);
  REQUIRE(first.size() == 2);
  CHECK(first[0].id == "proposition-even");
  CHECK(first[1].id == "h-H-connection");
  const auto second = run_suite(q, ctx, opts);
  CHECK(to_json(first).dump() == to_json(second).dump());

  SuiteOptions bad;
  bad.only = {"no-such-check"};
  CHECK_THROWS_AS(run_suite(q, ctx, bad), PreconditionError);
  CHECK_THROWS_AS(run_identity("no-such-check", q, ctx), PreconditionError);
  CHECK(identity_ids().size() == 9);
}

TEST_CASE("identity report JSON shape") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const auto r = run_identity("product-identity", QParam(dec("0.5", ctx)), ctx);
  const auto j = to_json(r);
  CHECK(j["id"] == "product-identity");
  CHECK(j["pass"] == false);
  CHECK(j["components"].size() == r.components.size());
  CHECK(j.contains("max_residual"));
  CHECK(j.contains("sample_grid"));
}
