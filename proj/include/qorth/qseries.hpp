#pragma once

// q-series primitives: shifted q-factorials, their infinite extension with an
// a-priori truncation certificate, and the r phi r-1 basic hypergeometric sum.

#include <cstddef>
#include <optional>
#include <span>

#include "qorth/precision.hpp"

namespace qorth {

/// (a;q)_n = prod_{k<n} (1 - a q^k). Exactly 1 for n = 0.
QReal qpoch(const QReal& a, const QParam& q, std::size_t n, const PrecisionContext& ctx);

/// Value of (a;q)_inf with the certificate that justified the cut-off.
struct CertifiedProduct {
  QReal value;
  std::size_t terms = 0;  ///< factors actually multiplied
  QReal tail_bound;       ///< bound on |dropped tail| relative to |value|
};

/// (a;q)_inf truncated at the first K with |a| q^K <= 1/2 and
/// 2 * 2|a| q^K / (1-q) < tol, which bounds the relative error of dropping
/// every factor from K on (|log(1-u)| <= 2|u| for |u| <= 1/2).
/// Throws TruncationFailure if K would exceed ctx.max_terms().
CertifiedProduct qpoch_inf_certified(const QReal& a, const QParam& q, const PrecisionContext& ctx);

QReal qpoch_inf(const QReal& a, const QParam& q, const PrecisionContext& ctx);

/// r phi r-1 (numerator; denominator; q, z).
///
/// Terms are generated by the multiplicative term ratio. When
/// `terminating_at` = N is given, one numerator parameter must equal q^-N and
/// exactly N+1 terms are summed. Otherwise summation stops once
/// |term| < tol |partial sum| while the term ratio is below one.
///
/// Throws PreconditionError on a parameter-count mismatch or a missing q^-N
/// numerator, PoleError if a denominator factor (b;q)_n vanishes before
/// termination, TruncationFailure if max_terms is reached.
QReal basic_hypergeometric(std::span<const QReal> numerator, std::span<const QReal> denominator,
                           const QParam& q, const QReal& z, const PrecisionContext& ctx,
                           std::optional<std::size_t> terminating_at = std::nullopt);

}  // namespace qorth
