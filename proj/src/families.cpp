#include "qorth/families.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "qorth/qseries.hpp"

namespace qorth {

namespace {

void require_kind(const FamilySpec& spec, FamilyKind kind, std::string_view op) {
  if (spec.kind() != kind) {
    throw PreconditionError(std::string(op) + " needs family " + std::string(to_string(kind)) +
                            ", got " + std::string(to_string(spec.kind())));
  }
}

// h_{n+1} = 2x h_n - c_n h_{n-1}
QReal hermite_c(unsigned n, const QReal& q) {
  const QReal qn = pow(q, static_cast<long>(n));
  return (QReal(1) - qn) / qn;
}

// mu D_j = -A_j D_{j+1} + B_j D_j - C_j D_{j-1}
struct DualCoefficients {
  QReal a, b, c;
};

DualCoefficients dual_coefficients(unsigned j, const QReal& s, const QReal& q,
                                   const PrecisionContext& ctx) {
  const QReal q2j = pow(q, 2 * static_cast<long>(j));
  const QReal lead = QReal(1) - s * q2j * q * q;
  if (abs(lead) <= ctx.zero_threshold()) {
    throw DegenerateCoefficient("D recurrence: 1 - s q^(2n+2) vanishes at n = " +
                                std::to_string(j));
  }
  const QReal inv = QReal(1) / (q2j * q);  // q^(-2j-1)
  return {inv * lead, inv * (QReal(1) + q), (QReal(1) - q2j) / q2j};
}

}  // namespace

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::QInvHermite: return "h";
    case FamilyKind::DiscreteUltra: return "C";
    case FamilyKind::DualDiscreteUltra: return "D";
    case FamilyKind::TildeEvenHermite: return "htilde";
  }
  return "?";
}

FamilyKind family_kind_from_string(std::string_view name) {
  if (name == "h") return FamilyKind::QInvHermite;
  if (name == "C") return FamilyKind::DiscreteUltra;
  if (name == "D") return FamilyKind::DualDiscreteUltra;
  if (name == "htilde") return FamilyKind::TildeEvenHermite;
  throw PreconditionError("family must be one of h, htilde, C, D; got '" + std::string(name) + "'");
}

FamilySpec::FamilySpec(FamilyKind kind, QParam q, std::optional<QReal> s)
    : kind_(kind), q_(std::move(q)), s_(std::move(s)) {}

FamilySpec FamilySpec::q_inv_hermite(QParam q) {
  return FamilySpec(FamilyKind::QInvHermite, std::move(q), std::nullopt);
}

FamilySpec FamilySpec::tilde_even_hermite(QParam q) {
  return FamilySpec(FamilyKind::TildeEvenHermite, std::move(q), std::nullopt);
}

FamilySpec FamilySpec::discrete_ultra(QParam q, QReal s) {
  if (!(s > 0)) throw PreconditionError("s must satisfy s>0 for family C");
  return FamilySpec(FamilyKind::DiscreteUltra, std::move(q), std::move(s));
}

FamilySpec FamilySpec::dual_discrete_ultra(QParam q, QReal s) {
  if (!(s > 0)) throw PreconditionError("s must satisfy s>0 for family D");
  return FamilySpec(FamilyKind::DualDiscreteUltra, std::move(q), std::move(s));
}

const QReal& FamilySpec::s_value() const {
  if (!s_) throw PreconditionError("family " + std::string(to_string(kind_)) + " has no s");
  return *s_;
}

MuPoint MuPoint::on_grid(long x, const QReal& s, const QParam& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const QReal qx = pow(q.value(), x);
  return {QReal(x), x, s, QReal(1) / qx + s * qx * q.value()};
}

MuPoint MuPoint::at(const QReal& x, const QReal& s, const QParam& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const QReal qx = pow(q.value(), x);
  std::optional<long> index;
  if (floor(x) == x && abs(x) < QReal(1L << 30)) index = x.to_long();
  return {x, index, s, QReal(1) / qx + s * qx * q.value()};
}

// ---------------------------------------------------------------------------

namespace {

// Bits lost to cancellation in the explicit h series: the largest term is
// about q^(-n^2/4) times a q-binomial below 2^n / (q;q)_inf.
unsigned series_guard_bits(unsigned n, const QParam& q) {
  const double lq = -std::log2(q.value().to_double());
  const double loss = 0.25 * n * n * lq + n + 8.0 / (1.0 - q.value().to_double());
  return static_cast<unsigned>(std::ceil(loss)) + 32;
}

}  // namespace

QReal eval_h_series(unsigned n, const QReal& phi, const QParam& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx.bits() + series_guard_bits(n, q));
  const QReal& qv = q.value();
  const QReal e2 = exp(-ldexp(phi, 1));  // e^{-2 phi}
  QReal ephi = exp(phi * QReal(static_cast<long>(n)));  // e^{phi (n - 2k)} at k = 0
  QReal binom(1);                                        // (q;q)_n / ((q;q)_k (q;q)_{n-k})
  QReal sum;
  for (unsigned k = 0; k <= n; ++k) {
    const long e = static_cast<long>(k) * (static_cast<long>(k) - static_cast<long>(n));
    QReal term = binom * pow(qv, e) * ephi;
    if (k % 2 == 1) term = -term;
    sum += term;
    if (k == n) break;
    binom *= (QReal(1) - pow(qv, static_cast<long>(n - k))) /
             (QReal(1) - pow(qv, static_cast<long>(k + 1)));
    ephi *= e2;
  }
  return rounded(sum, ctx.bits());
}

std::vector<QReal> eval_h_all(unsigned N, const QReal& x, const QParam& q,
                              const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  std::vector<QReal> h;
  h.reserve(N + 1);
  h.emplace_back(1);
  if (N == 0) return h;
  const QReal two_x = ldexp(x, 1);
  h.push_back(two_x);
  for (unsigned n = 1; n < N; ++n) {
    h.push_back(two_x * h[n] - hermite_c(n, q.value()) * h[n - 1]);
  }
  return h;
}

QReal eval_h_recurrence(unsigned n, const QReal& x, const QParam& q, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  QReal prev;
  QReal cur(1);
  const QReal two_x = ldexp(x, 1);
  for (unsigned j = 0; j < n; ++j) {
    QReal next = two_x * cur - hermite_c(j, q.value()) * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

QReal h_series_linear_coefficient(unsigned n, const QParam& q, const PrecisionContext& ctx) {
  // d/dx at x = 0 equals d/dphi at phi = 0, which weights each series term by (n - 2k).
  PrecisionScope scope(ctx.bits() + series_guard_bits(n, q));
  const QReal& qv = q.value();
  QReal binom(1);
  QReal sum;
  for (unsigned k = 0; k <= n; ++k) {
    const long e = static_cast<long>(k) * (static_cast<long>(k) - static_cast<long>(n));
    QReal term = binom * pow(qv, e) * QReal(static_cast<long>(n) - 2 * static_cast<long>(k));
    if (k % 2 == 1) term = -term;
    sum += term;
    if (k == n) break;
    binom *= (QReal(1) - pow(qv, static_cast<long>(n - k))) /
             (QReal(1) - pow(qv, static_cast<long>(k + 1)));
  }
  return rounded(sum, ctx.bits());
}

QReal eval_h_tilde(unsigned k, const QReal& x, const QParam& q, const PrecisionContext& ctx) {
  if (x.is_zero()) return h_series_linear_coefficient(2 * k + 1, q, ctx);
  PrecisionScope scope(ctx);
  // even_j = h_{2j}, odd_j = h~_{2j} with h_{2j+1} = x odd_j.
  const QReal x2 = x * x;
  QReal even(1);
  QReal odd(2);
  for (unsigned j = 0; j < k; ++j) {
    QReal next_even = ldexp(x2 * odd, 1) - hermite_c(2 * j + 1, q.value()) * even;
    odd = ldexp(next_even, 1) - hermite_c(2 * j + 2, q.value()) * odd;
    even = std::move(next_even);
  }
  return odd;
}

// ---------------------------------------------------------------------------

QReal eval_C(unsigned n, const QReal& x, const FamilySpec& spec, const PrecisionContext& ctx) {
  require_kind(spec, FamilyKind::DiscreteUltra, "eval_C");
  PrecisionScope scope(ctx);
  const QReal& q = spec.q().value();
  const QReal& s = spec.s_value();
  const QReal rs = sqrt(s);
  const QReal qn = pow(q, static_cast<long>(n));
  const std::array<QReal, 3> num{QReal(1) / qn, -s * qn * q, x};
  const std::array<QReal, 2> den{rs * q, -rs * q};
  return basic_hypergeometric(num, den, spec.q(), q, ctx, n);
}

QReal eval_D_series(unsigned n, const MuPoint& point, const FamilySpec& spec,
                    const PrecisionContext& ctx) {
  require_kind(spec, FamilyKind::DualDiscreteUltra, "eval_D_series");
  PrecisionScope scope(ctx);
  const QReal& q = spec.q().value();
  const QReal& s = spec.s_value();
  const QReal rs = sqrt(s);
  const QReal qx = pow(q, point.x);
  const QReal qn = pow(q, static_cast<long>(n));
  const std::array<QReal, 3> num{QReal(1) / qx, s * qx * q, QReal(1) / qn};
  const std::array<QReal, 2> den{rs * q, -rs * q};
  std::size_t stop = n;
  if (point.grid_index && *point.grid_index >= 0) {
    stop = std::min<std::size_t>(n, static_cast<std::size_t>(*point.grid_index));
  }
  return basic_hypergeometric(num, den, spec.q(), -(qn * q), ctx, stop);
}

RecurrenceTrace eval_D_all(unsigned N, const QReal& mu, const FamilySpec& spec,
                           const PrecisionContext& ctx) {
  require_kind(spec, FamilyKind::DualDiscreteUltra, "eval_D_recurrence");
  PrecisionScope scope(ctx);
  const QReal& q = spec.q().value();
  const QReal& s = spec.s_value();
  RecurrenceTrace trace{{}, QReal(1)};
  trace.values.reserve(N + 1);
  trace.values.emplace_back(1);
  QReal prev;
  for (unsigned j = 0; j < N; ++j) {
    const auto c = dual_coefficients(j, s, q, ctx);
    const QReal& cur = trace.values.back();
    QReal next = ((c.b - mu) * cur - c.c * prev) / c.a;
    trace.max_intermediate = max(trace.max_intermediate, abs(next));
    prev = cur;
    trace.values.push_back(std::move(next));
  }
  return trace;
}

QReal eval_D_recurrence(unsigned n, const QReal& mu, const FamilySpec& spec,
                        const PrecisionContext& ctx) {
  return std::move(eval_D_all(n, mu, spec, ctx).values.back());
}

std::vector<QReal> eval_family_all(const FamilySpec& spec, unsigned N, const QReal& x,
                                   const PrecisionContext& ctx) {
  switch (spec.kind()) {
    case FamilyKind::QInvHermite: return eval_h_all(N, x, spec.q(), ctx);
    case FamilyKind::DualDiscreteUltra: return eval_D_all(N, x, spec, ctx).values;
    default:
      throw PreconditionError("eval_family_all supports families h and D only");
  }
}

std::vector<QReal> value_bound_constants(const FamilySpec& spec, unsigned N,
                                         const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const QReal& q = spec.q().value();
  std::vector<QReal> K;
  K.reserve(N + 1);
  K.emplace_back(1);
  QReal prev;
  for (unsigned j = 0; j < N; ++j) {
    // P_{j+1} = (alpha x + beta) P_j + gamma P_{j-1}
    QReal alpha, beta, gamma;
    switch (spec.kind()) {
      case FamilyKind::QInvHermite:
        alpha = QReal(2);
        beta = QReal(0);
        gamma = hermite_c(j, q);
        break;
      case FamilyKind::DualDiscreteUltra: {
        const auto c = dual_coefficients(j, spec.s_value(), q, ctx);
        alpha = QReal(1) / abs(c.a);
        beta = abs(c.b / c.a);
        gamma = abs(c.c / c.a);
        break;
      }
      default:
        throw PreconditionError("value_bound_constants supports families h and D only");
    }
    QReal next = (abs(alpha) + abs(beta)) * K.back() + abs(gamma) * prev;
    prev = K.back();
    K.push_back(std::move(next));
  }
  // A few ulps of headroom for rounding in the recurrence itself.
  const QReal guard = QReal(1) + QReal::exp2i(-static_cast<long>(ctx.bits()) / 2);
  for (auto& k : K) k *= guard;
  return K;
}

}  // namespace qorth
