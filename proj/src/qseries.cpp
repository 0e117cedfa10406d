#include "qorth/qseries.hpp"

#include <string>

namespace qorth {

QReal qpoch(const QReal& a, const QParam& q, std::size_t n, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  QReal result(1);
  QReal aqk = a;
  for (std::size_t k = 0; k < n; ++k) {
    result *= QReal(1) - aqk;
    aqk *= q.value();
  }
  return result;
}

CertifiedProduct qpoch_inf_certified(const QReal& a, const QParam& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  CertifiedProduct out{QReal(1), 0, QReal(0)};
  if (a.is_zero()) return out;

  const QReal half = QReal::exp2i(-1);
  const QReal one_minus_q = QReal(1) - q.value();
  QReal aqk = a;
  QReal bound;
  for (std::size_t k = 0;; ++k) {
    const QReal mag = abs(aqk);
    if (mag <= half) {
      bound = ldexp(mag, 2) / one_minus_q;  // 2 * (2|a|q^k / (1-q))
      if (bound < ctx.tol()) break;
    }
    if (k >= ctx.max_terms()) {
      throw TruncationFailure("qpoch_inf: max_terms reached before tail bound fell below tol",
                              to_decimal(bound, 20));
    }
    const QReal factor = QReal(1) - aqk;
    if (factor.is_zero()) {
      out.value = QReal(0);
      out.terms = k + 1;
      out.tail_bound = QReal(0);
      return out;
    }
    out.value *= factor;
    out.terms = k + 1;
    aqk *= q.value();
  }
  out.tail_bound = bound;
  return out;
}

QReal qpoch_inf(const QReal& a, const QParam& q, const PrecisionContext& ctx) {
  return qpoch_inf_certified(a, q, ctx).value;
}

QReal basic_hypergeometric(std::span<const QReal> numerator, std::span<const QReal> denominator,
                           const QParam& q, const QReal& z, const PrecisionContext& ctx,
                           std::optional<std::size_t> terminating_at) {
  if (numerator.size() != denominator.size() + 1) {
    throw PreconditionError("r phi r-1 needs r numerator and r-1 denominator parameters");
  }
  PrecisionScope scope(ctx);

  if (terminating_at) {
    const QReal qN = pow(q.value(), static_cast<long>(*terminating_at));
    const QReal slack = QReal::exp2i(-static_cast<long>(ctx.bits() / 2));
    bool found = false;
    for (const auto& a : numerator) {
      if (abs(a * qN - QReal(1)) <= slack) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw PreconditionError("terminating_at = " + std::to_string(*terminating_at) +
                              " requires a numerator parameter equal to q^-" +
                              std::to_string(*terminating_at));
    }
  }

  const QReal eps = ctx.zero_threshold();
  QReal sum(1);
  QReal term(1);
  QReal qn(1);  // q^n
  for (std::size_t n = 0;; ++n) {
    if (terminating_at && n >= *terminating_at) break;
    if (n >= ctx.max_terms()) {
      throw TruncationFailure("basic_hypergeometric: no decay within max_terms",
                              to_decimal(abs(term), 20));
    }
    QReal ratio = z;
    for (const auto& a : numerator) ratio *= QReal(1) - a * qn;
    for (const auto& b : denominator) {
      const QReal f = QReal(1) - b * qn;
      if (abs(f) <= eps) {
        throw PoleError("basic_hypergeometric: denominator factor (b;q)_" + std::to_string(n + 1) +
                        " vanishes");
      }
      ratio /= f;
    }
    qn *= q.value();
    ratio /= QReal(1) - qn;
    term *= ratio;
    sum += term;
    if (!terminating_at) {
      if (term.is_zero()) break;
      if (abs(term) < ctx.tol() * abs(sum) && abs(ratio) < 1) break;
    }
  }
  return sum;
}

}  // namespace qorth
