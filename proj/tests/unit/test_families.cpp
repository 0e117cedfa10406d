#include <vector>

#include "qorth/families.hpp"
#include "support.hpp"

using namespace qorth;
using qorth::testing::dec;
using qorth::testing::near;
using qorth::testing::ratio;

namespace {

std::vector<QReal> phi_samples(const PrecisionContext& ctx) {
  std::vector<QReal> out;
  for (int i = -6; i <= 6; ++i) out.push_back(QReal(i) / QReal(2));  // [-3, 3]
  out.push_back(dec("0.123", ctx));
  return out;
}

}  // namespace

TEST_CASE("h series: small degrees") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal phi = dec("1.3", ctx);
  CHECK(eval_h_series(0, phi, q, ctx) == QReal(1));
  CHECK(near(eval_h_series(1, phi, q, ctx), ldexp(sinh(phi), 1), ctx.tol()));
  // h_2(0) = -q^-1 (1 - q) = -1 at q = 1/2
  CHECK(eval_h_series(2, QReal(0), q, ctx) == QReal(-1));
}

TEST_CASE("h recurrence: exact rational values") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal x = dec("0.7", ctx);
  CHECK(eval_h_recurrence(1, x, q, ctx) == ldexp(x, 1));
  CHECK(eval_h_recurrence(3, QReal(0), q, ctx) == QReal(0));
  CHECK(eval_h_recurrence(4, QReal(1), q, ctx) == QReal(-21));
  CHECK(near(eval_h_recurrence(3, ratio(1, 3), q, ctx), ratio(-64, 27), ctx.tol()));
  const QParam q3(dec("0.3", ctx));
  CHECK(near(eval_h_recurrence(5, ratio(-3, 2), q3, ctx), ratio(-109750, 243), ctx.tol()));
  CHECK(near(eval_h_series(4, asinh(QReal(1)), q, ctx), QReal(-21), ctx.tol()));
}

TEST_CASE("h: series and recurrence agree") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  for (const char* qs : {"0.3", "0.5", "0.7"}) {
    const QParam q(dec(qs, ctx));
    for (const auto& phi : phi_samples(ctx)) {
      const auto all = eval_h_all(20, sinh(phi), q, ctx);
      for (unsigned n = 0; n <= 20; ++n) {
        const QReal series = eval_h_series(n, phi, q, ctx);
        CHECK(near(series, all[n], ctx.tol()));
        CHECK(all[n] == eval_h_recurrence(n, sinh(phi), q, ctx));
      }
    }
  }
}

TEST_CASE("h: parity") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.6", ctx));
  for (const char* xs : {"0.25", "1.5", "3"}) {
    const QReal x = dec(xs, ctx);
    for (unsigned k = 0; k <= 10; ++k) {
      CHECK(eval_h_recurrence(2 * k, -x, q, ctx) == eval_h_recurrence(2 * k, x, q, ctx));
      CHECK(eval_h_recurrence(2 * k + 1, -x, q, ctx) == -eval_h_recurrence(2 * k + 1, x, q, ctx));
      const QReal phi = asinh(x);
      CHECK(near(eval_h_series(2 * k, -phi, q, ctx), eval_h_series(2 * k, phi, q, ctx), ctx.tol()));
      CHECK(near(eval_h_series(2 * k + 1, -phi, q, ctx), -eval_h_series(2 * k + 1, phi, q, ctx),
                 ctx.tol()));
    }
  }
}

TEST_CASE("h: leading behaviour for large phi") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const QReal phi(10);
  for (unsigned n = 0; n <= 6; ++n) {
    const QReal r = eval_h_series(n, phi, q, ctx) / exp(phi * QReal(long(n)));
    CHECK(abs(r - QReal(1)) < dec("0.01", ctx));
  }
}

TEST_CASE("h tilde") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  CHECK(eval_h_tilde(0, dec("0.3", ctx), q, ctx) == QReal(2));
  CHECK(eval_h_tilde(0, QReal(0), q, ctx) == QReal(2));
  CHECK(near(eval_h_tilde(1, QReal(1), q, ctx), eval_h_recurrence(3, QReal(1), q, ctx), ctx.tol()));
  for (const char* xs : {"0.2", "1.1", "2.5", "-0.7"}) {
    const QReal x = dec(xs, ctx);
    for (unsigned k = 0; k <= 8; ++k) {
      CHECK(eval_h_tilde(k, -x, q, ctx) == eval_h_tilde(k, x, q, ctx));
      CHECK(near(eval_h_tilde(k, x, q, ctx) * x, eval_h_recurrence(2 * k + 1, x, q, ctx),
                 ctx.tol()));
    }
  }
  // value at 0 is the limit of h_{2k+1}(x)/x
  const QReal tiny = QReal::exp2i(-120);
  for (unsigned k = 0; k <= 6; ++k) {
    const QReal limit = eval_h_recurrence(2 * k + 1, tiny, q, ctx) / tiny;
    CHECK(near(eval_h_tilde(k, QReal(0), q, ctx), limit, QReal::exp2i(-100)));
  }
}

TEST_CASE("C: discrete q-ultraspherical values") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const FamilySpec c1 = FamilySpec::discrete_ultra(q, QReal(1));
  CHECK(eval_C(0, dec("0.9", ctx), c1, ctx) == QReal(1));
  CHECK(near(eval_C(1, QReal(0), c1, ctx), ratio(-2, 3), ctx.tol()));
  CHECK(eval_C(1, QReal(1), c1, ctx) == QReal(1));
  CHECK(near(eval_C(2, ratio(1, 4), c1, ctx), ratio(-23, 160), ctx.tol()));

  const FamilySpec pole = FamilySpec::discrete_ultra(q, QReal(4));  // sqrt(s) q = 1
  CHECK_THROWS_AS(eval_C(3, QReal(3), pole, ctx), PoleError);
  CHECK_THROWS_AS(FamilySpec::discrete_ultra(q, QReal(0)), PreconditionError);
  CHECK_THROWS_AS(eval_C(1, QReal(0), FamilySpec::q_inv_hermite(q), ctx), PreconditionError);

  const PrecisionContext wide = ctx.doubled();
  const QParam qw(dec("0.5", wide));
  const FamilySpec cw = FamilySpec::discrete_ultra(qw, dec("0.8", wide));
  const FamilySpec cn = FamilySpec::discrete_ultra(q, dec("0.8", ctx));
  for (unsigned n = 0; n <= 8; ++n) {
    CHECK(near(eval_C(n, dec("0.37", ctx), cn, ctx), eval_C(n, dec("0.37", wide), cw, wide),
               ctx.tol()));
  }
}

TEST_CASE("mu points") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const MuPoint p = MuPoint::on_grid(3, dec("0.5", ctx), q, ctx);
  CHECK(p.grid_index == 3);
  CHECK(p.mu == QReal(8) + dec("0.5", ctx) / QReal(16));
  const MuPoint r = MuPoint::at(dec("2.5", ctx), dec("0.5", ctx), q, ctx);
  CHECK_FALSE(r.grid_index.has_value());
  CHECK(near(r.mu, pow(q.value(), -r.x) + r.s * pow(q.value(), r.x + QReal(1)), ctx.tol()));
}

TEST_CASE("D: exact values on the grid") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const FamilySpec d = FamilySpec::dual_discrete_ultra(q, dec("0.5", ctx));
  const auto at = [&](unsigned n, long x, const FamilySpec& spec) {
    return eval_D_series(n, MuPoint::on_grid(x, spec.s_value(), spec.q(), ctx), spec, ctx);
  };
  CHECK(at(0, 4, d) == QReal(1));
  // D_1 = 1 + q (1 - q^-x)(1 - s q^(x+1)) / (1 - s q^2)
  CHECK(at(1, 1, d) == dec("0.5", ctx));
  CHECK(near(at(3, 2, d), ratio(-71, 64), ctx.tol()));
  const FamilySpec d2 = FamilySpec::dual_discrete_ultra(q, QReal(2));
  CHECK(near(at(4, 5, d2), ratio(31793911, 1048576), ctx.tol()));
  const QParam q3(dec("0.3", ctx));
  const FamilySpec d3 = FamilySpec::dual_discrete_ultra(q3, q3.value());
  CHECK(near(at(2, 3, d3), ratio(-9916813, 3000000), ctx.tol()));
}

TEST_CASE("D: recurrence values") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const FamilySpec d = FamilySpec::dual_discrete_ultra(q, QReal(2));  // s = q^-1
  CHECK(eval_D_recurrence(0, dec("7.5", ctx), d, ctx) == QReal(1));
  // D_1 = (q^-1 (1+q) - mu) q / (1 - s q^2)
  CHECK(eval_D_recurrence(1, QReal(2), d, ctx) == QReal(1));
  const QReal mu = dec("1.75", ctx);
  CHECK(near(eval_D_recurrence(1, mu, d, ctx),
             (QReal(3) - mu) * q.value() / (QReal(1) - QReal(2) * q.value() * q.value()),
             ctx.tol()));

  const FamilySpec bad = FamilySpec::dual_discrete_ultra(q, QReal(4));  // 1 - s q^2 = 0
  CHECK_THROWS_AS(eval_D_recurrence(1, QReal(1), bad, ctx), DegenerateCoefficient);
  CHECK(eval_D_recurrence(0, QReal(1), bad, ctx) == QReal(1));
}

TEST_CASE("D: series and recurrence agree on the integer grid") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  for (const char* qs : {"0.3", "0.5", "0.7"}) {
    const QParam q(dec(qs, ctx));
    for (const QReal& s : {QReal(1) / q.value(), q.value(), QReal(1), dec("0.37", ctx)}) {
      const FamilySpec d = FamilySpec::dual_discrete_ultra(q, s);
      for (long x = 0; x <= 12; ++x) {
        const MuPoint p = MuPoint::on_grid(x, s, q, ctx);
        const auto rec = eval_D_all(12, p.mu, d, ctx);
        for (unsigned n = 0; n <= 12; ++n) {
          CHECK(near(eval_D_series(n, p, d, ctx), rec.values[n], ctx.tol()));
        }
      }
    }
  }
}

TEST_CASE("D is a polynomial of degree n in mu") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const FamilySpec d = FamilySpec::dual_discrete_ultra(q, dec("0.8", ctx));
  const QReal h = dec("0.25", ctx);
  for (unsigned n = 0; n <= 8; ++n) {
    // (n+1)-th forward difference on mu = 1 + j h, j = 0..n+1
    std::vector<QReal> v;
    QReal scale(1);
    for (unsigned j = 0; j <= n + 1; ++j) {
      v.push_back(eval_D_recurrence(n, QReal(1) + h * QReal(long(j)), d, ctx));
      scale = max(scale, abs(v.back()));
    }
    for (unsigned order = 0; order <= n; ++order) {
      for (std::size_t j = 0; j + 1 < v.size() - order; ++j) v[j] = v[j + 1] - v[j];
    }
    CHECK(abs(v[0]) <= ctx.tol() * scale * QReal(1L << (n + 1)));
  }
}

TEST_CASE("D: the two proposition evaluation points agree with the series off grid") {
  // The series terminates through the q^-n slot for non-integer x as well.
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  const FamilySpec d = FamilySpec::dual_discrete_ultra(q, dec("0.8", ctx));
  const MuPoint p = MuPoint::at(dec("1.37", ctx), d.s_value(), q, ctx);
  for (unsigned n = 0; n <= 8; ++n) {
    CHECK(near(eval_D_series(n, p, d, ctx), eval_D_recurrence(n, p.mu, d, ctx), ctx.tol()));
  }
}

TEST_CASE("value bound constants dominate the polynomials") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  for (const FamilySpec& spec :
       {FamilySpec::q_inv_hermite(q), FamilySpec::dual_discrete_ultra(q, QReal(2)),
        FamilySpec::dual_discrete_ultra(q, q.value())}) {
    const auto K = value_bound_constants(spec, 10, ctx);
    for (const char* xs : {"-40", "-3", "-0.5", "0", "0.9", "2", "1000"}) {
      const QReal x = dec(xs, ctx);
      const auto P = eval_family_all(spec, 10, x, ctx);
      for (unsigned n = 0; n <= 10; ++n) {
        CHECK(abs(P[n]) <= K[n] * pow(max(QReal(1), abs(x)), long(n)));
      }
    }
  }
}

TEST_CASE("family kinds and parameters") {
  const PrecisionContext ctx;
  PrecisionScope scope(ctx);
  const QParam q(dec("0.5", ctx));
  CHECK(family_kind_from_string("h") == FamilyKind::QInvHermite);
  CHECK(family_kind_from_string("D") == FamilyKind::DualDiscreteUltra);
  CHECK(to_string(FamilyKind::TildeEvenHermite) == "htilde");
  CHECK_THROWS_AS(family_kind_from_string("Z"), PreconditionError);
  CHECK_FALSE(FamilySpec::q_inv_hermite(q).s().has_value());
  CHECK_THROWS_AS(FamilySpec::q_inv_hermite(q).s_value(), PreconditionError);
  CHECK_THROWS_AS(FamilySpec::dual_discrete_ultra(q, QReal(-1)), PreconditionError);
}
