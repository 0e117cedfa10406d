#include <set>
#include <string>

#include "qorth/gram.hpp"
#include "qorth/qseries.hpp"
#include "support.hpp"

using namespace qorth;
using qorth::testing::dec;
using qorth::testing::near;

namespace {

const char* const kZ_07_05 = "3.31757522531318042373905743796660785004174624759037953894021";
const char* const kZlin_07_05 = "2.21152895262298225511971695662660280542375933851237253399651";

}  // namespace

TEST_CASE("extremal normalization frozen values") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal a = dec("0.7", ctx);
  CHECK(near(extremal_normalization(a, q, ctx), dec(kZ_07_05, ctx), QReal::exp2i(-190)));
  CHECK(near(extremal_normalization_linear_a(a, q, ctx), dec(kZlin_07_05, ctx),
             QReal::exp2i(-190)));
}

TEST_CASE("hermite extremal atoms") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal a = dec("0.7", ctx);
  const QReal Z = dec(kZ_07_05, ctx);
  for (long m = -4; m <= 4; ++m) {
    const Atom at = hermite_extremal_weight(m, a, q, ctx);
    const QReal c = a * pow(q.value(), m);
    CHECK(at.m == m);
    CHECK(near(at.node, (QReal(1) / c - c) / QReal(2), ctx.tol()));
    const QReal w = pow(a, 4 * m) * pow(q.value(), m * (2 * m - 1)) * (QReal(1) + c * c) / Z;
    CHECK(near(at.weight, w, QReal::exp2i(-190)));
    CHECK(at.weight > 0);
  }
  CHECK_THROWS_WITH_AS(hermite_extremal_weight(0, dec("0.4", ctx), q, ctx),
                       "a must satisfy q<=a<1", PreconditionError);
  CHECK_THROWS_AS(hermite_extremal_weight(0, QReal(1), q, ctx), PreconditionError);
}

TEST_CASE("dual base atoms") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  // s = q^-1, even, k = 1 is 5/8
  const Atom even1 = dual_ultra_base_weight(1, QReal(2), Parity::Even, q, ctx);
  CHECK(near(even1.weight * DiscreteMeasure::dual_ultra_base(q, QReal(2), Parity::Even, ctx)
                                .normalization(),
             dec("0.625", ctx), ctx.tol()));
  const Atom even0 = dual_ultra_base_weight(0, QReal(1), Parity::Even, q, ctx);
  CHECK(even0.node == QReal(1) + dec("0.5", ctx));
  const Atom odd0 = dual_ultra_base_weight(0, QReal(1), Parity::Odd, q, ctx);
  CHECK(odd0.node == QReal(2) + dec("0.25", ctx));

  CHECK_THROWS_AS(dual_ultra_base_weight(-1, QReal(1), Parity::Even, q, ctx), PreconditionError);
  CHECK_THROWS_WITH_AS(DiscreteMeasure::dual_ultra_base(q, QReal(4), Parity::Even, ctx),
                       "s must satisfy 0<s<q^-2", PreconditionError);
  CHECK_THROWS_AS(DiscreteMeasure::dual_ultra_base(q, QReal(0), Parity::Odd, ctx),
                  PreconditionError);
  const auto base = DiscreteMeasure::dual_ultra_base(q, QReal(1), Parity::Even, ctx);
  CHECK_THROWS_AS(base.atom(-1), PreconditionError);
  CHECK_FALSE(base.two_sided());
}

TEST_CASE("dual extremal atoms") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal a = dec("0.8", ctx);
  for (long m = -5; m <= 5; ++m) {
    const QReal c = a * pow(q.value(), m);
    const Atom qinv = dual_qinv_extremal_weight(m, a, q, ctx);
    const Atom qext = dual_q_extremal_weight(m, a, q, ctx);
    const Atom herm = hermite_extremal_weight(m, a, q, ctx);
    CHECK(near(qinv.node, QReal(1) / (c * c) + c * c, ctx.tol()));
    CHECK(near(qext.node, q.value() * qinv.node, ctx.tol()));
    CHECK(near(qinv.weight, herm.weight, ctx.tol()));
    CHECK(qext.weight > 0);
    // the derived weight is the hermite weight times (1/c - c)^2 up to normalisation
    const QReal sq = (QReal(1) / c - c) * (QReal(1) / c - c);
    const QReal ratio = qext.weight / (herm.weight * sq);
    const QReal ratio0 = dual_q_extremal_weight(0, a, q, ctx).weight /
                         (hermite_extremal_weight(0, a, q, ctx).weight *
                          (QReal(1) / a - a) * (QReal(1) / a - a));
    CHECK(near(ratio, ratio0, ctx.tol()));
  }
  // the alternative weight turns negative below m = 0
  CHECK(dual_q_extremal_alternative_weight(-1, a, q, ctx) < 0);
  CHECK(dual_q_extremal_alternative_weight(1, a, q, ctx) > 0);
}

TEST_CASE("the lone zero-mass atom at a = q") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto m = DiscreteMeasure::dual_q_extremal(q, q.value(), ctx);
  REQUIRE(m.excluded_index().has_value());
  CHECK(*m.excluded_index() == -1);
  CHECK(m.atom(-1).weight.is_zero());
  CHECK(m.atom(-2).weight > 0);
  CHECK_FALSE(DiscreteMeasure::dual_q_extremal(q, dec("0.6", ctx), ctx).excluded_index());
}

TEST_CASE("measure and parity names") {
  CHECK(measure_kind_from_string("hermite-extremal") == MeasureKind::HermiteExtremal);
  CHECK(measure_kind_from_string("dual-base") == MeasureKind::DualUltraBase);
  CHECK(to_string(MeasureKind::DualUltraQinvExtremal) == "dual-qinv-extremal");
  CHECK(to_string(MeasureKind::DualUltraQExtremal) == "dual-q-extremal");
  CHECK(parity_from_string("odd") == Parity::Odd);
  CHECK_THROWS_AS(measure_kind_from_string("gauss"), PreconditionError);
  CHECK_THROWS_AS(parity_from_string("both"), PreconditionError);
}

TEST_CASE("majorant ratios bound the true step") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal a = dec("0.7", ctx);
  for (const auto& meas : {DiscreteMeasure::hermite_extremal(q, a, ctx),
                           DiscreteMeasure::dual_qinv_extremal(q, a, ctx),
                           DiscreteMeasure::dual_q_extremal(q, a, ctx)}) {
    for (unsigned d : {0u, 4u, 10u}) {
      for (long m = 3; m <= 12; ++m) {
        CHECK(meas.majorant(m + 1, d) <= meas.majorant_ratio(m, d, +1) * meas.majorant(m, d));
        CHECK(meas.majorant(-m - 1, d) <=
              meas.majorant_ratio(-m, d, -1) * meas.majorant(-m, d));
      }
    }
  }
}

TEST_CASE("Gram matrices are diagonal with the closed-form norms") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QReal threshold = QReal::exp2i(-150);
  for (const char* qs : {"0.3", "0.5", "0.7"}) {
    const QParam q(dec(qs, ctx));
    std::vector<DiscreteMeasure> measures;
    for (const QReal& a : {q.value(), sqrt(q.value()), dec("0.9", ctx)}) {
      measures.push_back(DiscreteMeasure::hermite_extremal(q, a, ctx));
      measures.push_back(DiscreteMeasure::dual_qinv_extremal(q, a, ctx));
      measures.push_back(DiscreteMeasure::dual_q_extremal(q, a, ctx));
    }
    for (const QReal& s : {QReal(1) / q.value(), q.value(), dec("0.37", ctx)}) {
      measures.push_back(DiscreteMeasure::dual_ultra_base(q, s, Parity::Even, ctx));
      measures.push_back(DiscreteMeasure::dual_ultra_base(q, s, Parity::Odd, ctx));
    }
    for (const auto& meas : measures) {
      CAPTURE(meas.name());
      CAPTURE(qs);
      const GramReport r = gram_matrix(meas.natural_family(), meas, 6, ctx);
      CHECK(r.off_diag_max < threshold);
      CHECK(r.diag_rel_err_max < threshold);
      CHECK(r.truncation.certified_tail_bound < ctx.tol());
      CHECK(r.pass());
    }
  }
}

TEST_CASE("Gram with N = 0 is the total mass") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto herm = DiscreteMeasure::hermite_extremal(q, dec("0.7", ctx), ctx);
  const GramReport r = gram_matrix(herm.natural_family(), herm, 0, ctx);
  REQUIRE(r.gram.size() == 1);
  CHECK(near(r.gram[0][0], QReal(1), QReal::exp2i(-190)));
  // unnormalised base mass at s = 1, even: frozen at 2
  const auto base = DiscreteMeasure::dual_ultra_base(q, QReal(1), Parity::Even, ctx);
  const GramReport b = gram_matrix(base.natural_family(), base, 0, ctx);
  CHECK(near(b.gram[0][0] * base.normalization(), QReal(2), QReal::exp2i(-190)));
}

TEST_CASE("incompatible family and measure") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const auto herm = DiscreteMeasure::hermite_extremal(q, dec("0.7", ctx), ctx);
  const auto qinv = DiscreteMeasure::dual_qinv_extremal(q, dec("0.7", ctx), ctx);
  CHECK_THROWS_AS(gram_matrix(FamilySpec::dual_discrete_ultra(q, QReal(2)), herm, 3, ctx),
                  IncompatiblePair);
  CHECK_THROWS_AS(gram_matrix(FamilySpec::q_inv_hermite(q), qinv, 3, ctx), IncompatiblePair);
  CHECK_THROWS_AS(gram_matrix(FamilySpec::dual_discrete_ultra(q, dec("0.5", ctx)), qinv, 3, ctx),
                  IncompatiblePair);
  const QParam other(dec("0.6", ctx));
  CHECK_THROWS_AS(gram_matrix(FamilySpec::q_inv_hermite(other), herm, 3, ctx), IncompatiblePair);
  CHECK_NOTHROW(require_compatible(FamilySpec::dual_discrete_ultra(q, QReal(2)), qinv));
}

TEST_CASE("truncation certificate is honest") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  for (const auto& meas : {DiscreteMeasure::hermite_extremal(q, dec("0.8", ctx), ctx),
                           DiscreteMeasure::dual_q_extremal(q, dec("0.8", ctx), ctx),
                           DiscreteMeasure::dual_ultra_base(q, q.value(), Parity::Odd, ctx)}) {
    CAPTURE(meas.name());
    const GramReport base = gram_matrix(meas.natural_family(), meas, 5, ctx);
    GramOptions wider;
    wider.extra_margin = 5;
    const GramReport wide = gram_matrix(meas.natural_family(), meas, 5, ctx, wider);
    CHECK(wide.truncation.m_hi == base.truncation.m_hi + 5);
    CHECK(wide.truncation.certified_tail_bound <= base.truncation.certified_tail_bound);
    for (unsigned i = 0; i <= 5; ++i) {
      for (unsigned j = 0; j <= 5; ++j) {
        CHECK(abs(wide.gram[i][j] - base.gram[i][j]) <=
              base.truncation.certified_tail_bound + QReal::exp2i(-240));
      }
    }
  }
}

TEST_CASE("Gram assembly is deterministic across thread counts") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.3", ctx));
  const auto meas = DiscreteMeasure::dual_qinv_extremal(q, dec("0.55", ctx), ctx);
  GramOptions one;
  one.threads = 1;
  GramOptions many;
  many.threads = 7;
  const auto a = to_json(gram_matrix(meas.natural_family(), meas, 5, ctx, one));
  const auto b = to_json(gram_matrix(meas.natural_family(), meas, 5, ctx, many));
  CHECK(a.dump() == b.dump());
}

TEST_CASE("Gram report JSON round trip") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  for (const auto& meas : {DiscreteMeasure::hermite_extremal(q, dec("0.7", ctx), ctx),
                           DiscreteMeasure::dual_ultra_base(q, QReal(2), Parity::Odd, ctx)}) {
    const GramReport r = gram_matrix(meas.natural_family(), meas, 3, ctx);
    const std::string first = to_json(r).dump(2);
    const GramReport back = gram_report_from_json(nlohmann::ordered_json::parse(first));
    CHECK(to_json(back).dump(2) == first);
    CHECK(back.gram[1][1] == r.gram[1][1]);
    CHECK(to_csv(r).rfind("n,n_prime,value,expected\n", 0) == 0);
  }
  CHECK_THROWS_AS(gram_report_from_json(nlohmann::ordered_json::parse(R"({"family":"h"})")),
                  PreconditionError);
}

TEST_CASE("extremal node sets for distinct a are disjoint") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  std::set<std::string> hashes;
  std::vector<QReal> as;
  for (int i = 0; i < 10; ++i) {
    as.push_back(q.value() + (dec("0.95", ctx) - q.value()) * QReal(i) / QReal(9));
  }
  for (std::size_t i = 0; i < as.size(); ++i) {
    hashes.insert(hermite_node_hash(as[i], q, 20, ctx));
    for (std::size_t j = i + 1; j < as.size(); ++j) {
      CHECK(hermite_node_gap(as[i], as[j], q, 20, ctx) > QReal::exp2i(-100));
    }
  }
  CHECK(hashes.size() == as.size());
  const QReal a = dec("0.9", ctx);
  CHECK(hermite_node_gap(a, a, q, 20, ctx).is_zero());
  CHECK(hermite_node_hash(a, q, 20, ctx).size() == 16);
}
