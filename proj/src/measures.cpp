#include "qorth/measures.hpp"

#include <cstdint>
#include <cstdio>
#include <limits>

#include "qorth/qseries.hpp"

namespace qorth {

namespace {

void require_a(const QReal& a, const QParam& q) {
  if (!(a >= q.value()) || !(a < 1)) throw PreconditionError("a must satisfy q<=a<1");
}

void require_base_s(const QReal& s, const QParam& q) {
  if (!(s > 0) || !(s * q.value() * q.value() < 1)) {
    throw PreconditionError("s must satisfy 0<s<q^-2");
  }
}

// a^4m q^m(2m-1) (1 + a^2 q^2m): shared by the h and D^(q^-1) extremal measures.
QReal extremal_core(long m, const QReal& a, const QReal& q) {
  const QReal aqm2 = a * a * pow(q, 2 * m);
  return pow(a, 4 * m) * pow(q, m * (2 * m - 1)) * (QReal(1) + aqm2);
}

QReal base_unnormalized(long k, const QReal& s, Parity parity, const QParam& q,
                        const PrecisionContext& ctx) {
  const QReal& qv = q.value();
  if (parity == Parity::Even) {
    if (k == 0) return QReal(1);
    // (sq;q)_2k / (1 - sq) = (sq^2;q)_(2k-1)
    return (QReal(1) - s * pow(qv, 4 * k + 1)) * qpoch(s * qv * qv, q, 2 * k - 1, ctx) /
           qpoch(qv, q, 2 * k, ctx) * pow(qv, k * (2 * k - 1));
  }
  return (QReal(1) - s * pow(qv, 4 * k + 3)) * qpoch(s * qv * qv, q, 2 * k, ctx) /
         qpoch(qv, q, 2 * k + 1, ctx) * pow(qv, k * (2 * k + 1));
}

QReal base_node(long k, const QReal& s, Parity parity, const QReal& q) {
  const long j = parity == Parity::Even ? 2 * k : 2 * k + 1;
  const QReal qj = pow(q, j);
  return QReal(1) / qj + s * qj * q;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::HermiteExtremal: return "hermite-extremal";
    case MeasureKind::DualUltraBase: return "dual-base";
    case MeasureKind::DualUltraQinvExtremal: return "dual-qinv-extremal";
    case MeasureKind::DualUltraQExtremal: return "dual-q-extremal";
  }
  return "?";
}

MeasureKind measure_kind_from_string(std::string_view name) {
  if (name == "hermite-extremal") return MeasureKind::HermiteExtremal;
  if (name == "dual-base") return MeasureKind::DualUltraBase;
  if (name == "dual-qinv-extremal") return MeasureKind::DualUltraQinvExtremal;
  if (name == "dual-q-extremal") return MeasureKind::DualUltraQExtremal;
  throw PreconditionError(
      "measure must be one of hermite-extremal, dual-base, dual-qinv-extremal, dual-q-extremal; "
      "got '" + std::string(name) + "'");
}

std::string_view to_string(Parity parity) { return parity == Parity::Even ? "even" : "odd"; }

Parity parity_from_string(std::string_view name) {
  if (name == "even") return Parity::Even;
  if (name == "odd") return Parity::Odd;
  throw PreconditionError("parity must be even or odd, got '" + std::string(name) + "'");
}

QReal extremal_normalization(const QReal& a, const QParam& q, const PrecisionContext& outer) {
  const PrecisionContext ctx = outer.full_precision();
  PrecisionScope scope(ctx);
  const QReal a2 = a * a;
  return qpoch_inf(-a2, q, ctx) * qpoch_inf(-(q.value() / a2), q, ctx) *
         qpoch_inf(q.value(), q, ctx);
}

QReal extremal_normalization_linear_a(const QReal& a, const QParam& q,
                                      const PrecisionContext& outer) {
  const PrecisionContext ctx = outer.full_precision();
  PrecisionScope scope(ctx);
  return qpoch_inf(-(a * a), q, ctx) * qpoch_inf(-(q.value() / a), q, ctx) *
         qpoch_inf(q.value(), q, ctx);
}

// ---------------------------------------------------------------------------

Atom hermite_extremal_weight(long m, const QReal& a, const QParam& q, const PrecisionContext& ctx) {
  require_a(a, q);
  return DiscreteMeasure::hermite_extremal(q, a, ctx).atom(m);
}

Atom dual_ultra_base_weight(long k, const QReal& s, Parity parity, const QParam& q,
                            const PrecisionContext& ctx) {
  if (k < 0) throw PreconditionError("k must satisfy k>=0");
  return DiscreteMeasure::dual_ultra_base(q, s, parity, ctx).atom(k);
}

Atom dual_qinv_extremal_weight(long m, const QReal& a, const QParam& q,
                               const PrecisionContext& ctx) {
  return DiscreteMeasure::dual_qinv_extremal(q, a, ctx).atom(m);
}

Atom dual_q_extremal_weight(long m, const QReal& a, const QParam& q, const PrecisionContext& ctx) {
  return DiscreteMeasure::dual_q_extremal(q, a, ctx).atom(m);
}

QReal dual_q_extremal_alternative_weight(long m, const QReal& a, const QParam& q,
                                         const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const QReal& qv = q.value();
  const QReal c2 = a * a * pow(qv, 2 * m);
  return pow(a, 4 * m) * pow(qv, m * (2 * m - 1)) * (QReal(1) / c2 - c2);
}

// ---------------------------------------------------------------------------

DiscreteMeasure::DiscreteMeasure(MeasureDescriptor desc, QParam q, const PrecisionContext& ctx)
    : desc_(std::move(desc)), q_(std::move(q)), ctx_(ctx), normalization_(1) {}

DiscreteMeasure DiscreteMeasure::hermite_extremal(QParam q, QReal a, const PrecisionContext& ctx) {
  require_a(a, q);
  DiscreteMeasure m({MeasureKind::HermiteExtremal, q.value(), std::nullopt, a, std::nullopt}, q,
                    ctx);
  m.normalization_ = extremal_normalization(a, m.q_, ctx);
  return m;
}

DiscreteMeasure DiscreteMeasure::dual_ultra_base(QParam q, QReal s, Parity parity,
                                                 const PrecisionContext& ctx) {
  require_base_s(s, q);
  return DiscreteMeasure({MeasureKind::DualUltraBase, q.value(), s, std::nullopt, parity}, q, ctx);
}

DiscreteMeasure DiscreteMeasure::dual_qinv_extremal(QParam q, QReal a,
                                                    const PrecisionContext& ctx) {
  require_a(a, q);
  DiscreteMeasure m({MeasureKind::DualUltraQinvExtremal, q.value(), std::nullopt, a, std::nullopt},
                    q, ctx);
  m.normalization_ = extremal_normalization(a, m.q_, ctx);
  return m;
}

DiscreteMeasure DiscreteMeasure::dual_q_extremal(QParam q, QReal a, const PrecisionContext& ctx) {
  require_a(a, q);
  DiscreteMeasure m({MeasureKind::DualUltraQExtremal, q.value(), std::nullopt, a, std::nullopt}, q,
                    ctx);
  m.normalization_ = extremal_normalization(a, m.q_, ctx);
  if (a == q.value()) m.excluded_ = -1;
  return m;
}

QReal DiscreteMeasure::unnormalized_weight(long m) const {
  PrecisionScope scope(ctx_);
  const QReal& q = q_.value();
  switch (desc_.kind) {
    case MeasureKind::HermiteExtremal:
    case MeasureKind::DualUltraQinvExtremal:
      return extremal_core(m, *desc_.a, q);
    case MeasureKind::DualUltraQExtremal: {
      const QReal c = *desc_.a * pow(q, m);
      const QReal gap = QReal(1) / c - c;
      return extremal_core(m, *desc_.a, q) * gap * gap;
    }
    case MeasureKind::DualUltraBase:
      return base_unnormalized(m, *desc_.s, *desc_.parity, q_, ctx_);
  }
  return QReal(0);
}

QReal DiscreteMeasure::node(long m) const {
  PrecisionScope scope(ctx_);
  const QReal& q = q_.value();
  switch (desc_.kind) {
    case MeasureKind::HermiteExtremal: {
      const QReal c = *desc_.a * pow(q, m);
      return ldexp(QReal(1) / c - c, -1);
    }
    case MeasureKind::DualUltraQinvExtremal: {
      const QReal c2 = *desc_.a * *desc_.a * pow(q, 2 * m);
      return QReal(1) / c2 + c2;
    }
    case MeasureKind::DualUltraQExtremal: {
      const QReal c2 = *desc_.a * *desc_.a * pow(q, 2 * m);
      return (QReal(1) / c2 + c2) * q;
    }
    case MeasureKind::DualUltraBase:
      return base_node(m, *desc_.s, *desc_.parity, q);
  }
  return QReal(0);
}

Atom DiscreteMeasure::atom(long m) const {
  if (!two_sided() && m < 0) {
    throw PreconditionError("index must satisfy k>=0 for measure " + name());
  }
  PrecisionScope scope(ctx_);
  Atom out{m, node(m), unnormalized_weight(m) / normalization_};
  if (excluded_ && *excluded_ == m) {
    out.weight = QReal(0);
    return out;
  }
  if (!(out.weight > 0)) {
    throw SignViolation("measure " + name() + ": weight at index " + std::to_string(m) +
                        " is not positive (" + to_decimal(out.weight, 20) + ")");
  }
  return out;
}

FamilySpec DiscreteMeasure::natural_family() const {
  PrecisionScope scope(ctx_);
  switch (desc_.kind) {
    case MeasureKind::HermiteExtremal: return FamilySpec::q_inv_hermite(q_);
    case MeasureKind::DualUltraBase: return FamilySpec::dual_discrete_ultra(q_, *desc_.s);
    case MeasureKind::DualUltraQinvExtremal:
      return FamilySpec::dual_discrete_ultra(q_, QReal(1) / q_.value());
    case MeasureKind::DualUltraQExtremal: return FamilySpec::dual_discrete_ultra(q_, q_.value());
  }
  throw PreconditionError("unknown measure");
}

std::vector<QReal> DiscreteMeasure::expected_diagonal(unsigned N) const {
  PrecisionScope scope(ctx_);
  const QReal& q = q_.value();
  const QParam q2(q * q);
  std::vector<QReal> diag;
  diag.reserve(N + 1);
  QReal prefactor(1);
  if (desc_.kind == MeasureKind::DualUltraBase) {
    const QReal& s = *desc_.s;
    const PrecisionContext full = ctx_.full_precision();
    prefactor = qpoch_inf(s * q * q * q, q2, full) / qpoch_inf(q, q2, full);
  }
  for (unsigned n = 0; n <= N; ++n) {
    const long k = n;
    switch (desc_.kind) {
      case MeasureKind::HermiteExtremal:
        diag.push_back(pow(q, -(k * (k + 1)) / 2) * qpoch(q, q_, n, ctx_));
        break;
      case MeasureKind::DualUltraBase:
        diag.push_back(prefactor * qpoch(q * q, q2, n, ctx_) * pow(q, -k) /
                       qpoch(*desc_.s * q * q, q2, n, ctx_));
        break;
      case MeasureKind::DualUltraQinvExtremal: {
        const QReal c = qpoch(q, q2, n, ctx_);
        diag.push_back(pow(q, -k) * qpoch(q, q_, 2 * n, ctx_) / (c * c));
        break;
      }
      case MeasureKind::DualUltraQExtremal: {
        const QReal c = qpoch(q * q * q, q2, n, ctx_);
        diag.push_back(pow(q, -k - 1) * qpoch(q, q_, 2 * n + 1, ctx_) / (c * c));
        break;
      }
    }
  }
  return diag;
}

QReal DiscreteMeasure::envelope(long m) const {
  PrecisionScope scope(ctx_);
  switch (desc_.kind) {
    case MeasureKind::HermiteExtremal: {
      // a^-1 q^-m + a q^m >= max(2, 2|x_m|)
      const QReal c = *desc_.a * pow(q_.value(), m);
      return QReal(1) / c + c;
    }
    case MeasureKind::DualUltraQinvExtremal:
      return node(m);  // >= 2
    case MeasureKind::DualUltraQExtremal:
    case MeasureKind::DualUltraBase:
      return QReal(1) + node(m);
  }
  return QReal(0);
}

QReal DiscreteMeasure::majorant(long m, unsigned degree) const {
  PrecisionScope scope(ctx_);
  QReal w;
  if (desc_.kind == MeasureKind::DualUltraQExtremal) {
    // (B - C)^2 <= (B + C)^2 with B = 1/(a q^m), C = a q^m
    const QReal c = *desc_.a * pow(q_.value(), m);
    const QReal sum = QReal(1) / c + c;
    w = extremal_core(m, *desc_.a, q_.value()) * sum * sum / normalization_;
  } else {
    w = abs(unnormalized_weight(m)) / normalization_;
  }
  return w * pow(envelope(m), static_cast<long>(degree));
}

QReal DiscreteMeasure::majorant_ratio(long m, unsigned degree, int dir) const {
  PrecisionScope scope(ctx_);
  const QReal& q = q_.value();
  const long d = static_cast<long>(degree);
  switch (desc_.kind) {
    case MeasureKind::HermiteExtremal:
    case MeasureKind::DualUltraQinvExtremal:
    case MeasureKind::DualUltraQExtremal: {
      const QReal& a = *desc_.a;
      // weight ratio: a^4 q^(4m+1) upward, a^-4 q^(-4m+1) downward
      QReal r = dir > 0 ? pow(a, 4) * pow(q, 4 * m + 1) : pow(a, -4) * pow(q, -4 * m + 1);
      long envelope_power = desc_.kind == MeasureKind::HermiteExtremal ? d : 2 * d;
      if (desc_.kind == MeasureKind::DualUltraQExtremal) envelope_power += 2;
      return r * pow(q, -envelope_power);
    }
    case MeasureKind::DualUltraBase: {
      if (dir < 0) throw PreconditionError("dual-base support is one-sided");
      const QReal one(1);
      QReal r;
      if (*desc_.parity == Parity::Even) {
        if (m < 1) return QReal(std::numeric_limits<double>::infinity());
        r = pow(q, 4 * m + 1) /
            ((one - pow(q, 4 * m - 1)) * (one - pow(q, 2 * m + 1)) * (one - pow(q, 2 * m + 2)));
      } else {
        if (m < 0) return QReal(std::numeric_limits<double>::infinity());
        r = pow(q, 4 * m + 3) /
            ((one - pow(q, 4 * m + 1)) * (one - pow(q, 2 * m + 2)) * (one - pow(q, 2 * m + 3)));
      }
      return r * pow(q, -2 * d);
    }
  }
  return QReal(0);
}

// ---------------------------------------------------------------------------

QReal hermite_node_gap(const QReal& a1, const QReal& a2, const QParam& q, long window,
                       const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const auto m1 = DiscreteMeasure::hermite_extremal(q, a1, ctx);
  const auto m2 = DiscreteMeasure::hermite_extremal(q, a2, ctx);
  std::vector<QReal> other;
  for (long j = -window; j <= window; ++j) other.push_back(m2.node(j));
  QReal best(std::numeric_limits<double>::infinity());
  for (long m = -window; m <= window; ++m) {
    const QReal x = m1.node(m);
    const QReal scale = max(QReal(1), abs(x));
    for (const auto& y : other) best = min(best, abs(x - y) / scale);
  }
  return best;
}

std::string hermite_node_hash(const QReal& a, const QParam& q, long window,
                              const PrecisionContext& ctx) {
  const auto measure = DiscreteMeasure::hermite_extremal(q, a, ctx);
  std::uint64_t h = 1469598103934665603ULL;
  for (long m = -window; m <= window; ++m) {
    h = fnv1a(to_decimal(measure.node(m), 30), h);
    h = fnv1a(";", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qorth
