#pragma once

// Evaluators for the q^-1-Hermite family h_n, its odd quotient h~_2k, the
// discrete q-ultraspherical family C_n^(s) and its dual D_n^(s).
//
// Every family has two independent evaluation routes (explicit series and
// three-term recurrence) so the two can be checked against each other.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qorth/precision.hpp"

namespace qorth {

enum class FamilyKind { QInvHermite, DiscreteUltra, DualDiscreteUltra, TildeEvenHermite };

std::string_view to_string(FamilyKind kind);
FamilyKind family_kind_from_string(std::string_view name);

/// Family tag with its parameters. s is required (and must be positive) for
/// DiscreteUltra and DualDiscreteUltra, and absent for the Hermite kinds.
class FamilySpec {
 public:
  static FamilySpec q_inv_hermite(QParam q);
  static FamilySpec tilde_even_hermite(QParam q);
  static FamilySpec discrete_ultra(QParam q, QReal s);
  static FamilySpec dual_discrete_ultra(QParam q, QReal s);

  FamilyKind kind() const { return kind_; }
  const QParam& q() const { return q_; }
  const std::optional<QReal>& s() const { return s_; }
  /// s, or PreconditionError if this kind carries none.
  const QReal& s_value() const;

 private:
  FamilySpec(FamilyKind kind, QParam q, std::optional<QReal> s);
  FamilyKind kind_;
  QParam q_;
  std::optional<QReal> s_;
};

/// mu(x;s) = q^-x + s q^(x+1), with the integer grid label when x is one.
struct MuPoint {
  QReal x;
  std::optional<long> grid_index;
  QReal s;
  QReal mu;

  static MuPoint on_grid(long x, const QReal& s, const QParam& q, const PrecisionContext& ctx);
  static MuPoint at(const QReal& x, const QReal& s, const QParam& q, const PrecisionContext& ctx);
};

// -- q^-1-Hermite ------------------------------------------------------------

/// h_n(sinh phi | q) from the explicit finite sum in e^{phi(n-2k)}.
QReal eval_h_series(unsigned n, const QReal& phi, const QParam& q, const PrecisionContext& ctx);

/// h_n(x | q) by the upward recurrence h_{n+1} = 2x h_n - q^-n (1-q^n) h_{n-1}.
QReal eval_h_recurrence(unsigned n, const QReal& x, const QParam& q, const PrecisionContext& ctx);

/// h_0 .. h_N at x in one recurrence pass.
std::vector<QReal> eval_h_all(unsigned N, const QReal& x, const QParam& q,
                              const PrecisionContext& ctx);

/// h~_2k(x|q) = h_{2k+1}(x|q) / x. Evaluated without division; at x = 0 the
/// value is the linear coefficient of h_{2k+1} taken from the series.
QReal eval_h_tilde(unsigned k, const QReal& x, const QParam& q, const PrecisionContext& ctx);

/// d/dx h_n(x|q) at x = 0, summed from the explicit series.
QReal h_series_linear_coefficient(unsigned n, const QParam& q, const PrecisionContext& ctx);

// -- discrete q-ultraspherical and its dual ------------------------------------

/// C_n^(s)(x;q) = 3phi2(q^-n, -s q^(n+1), x; sqrt(s) q, -sqrt(s) q; q, q).
QReal eval_C(unsigned n, const QReal& x, const FamilySpec& spec, const PrecisionContext& ctx);

/// D_n^(s)(mu(x;s)|q) = 3phi2(q^-x, s q^(x+1), q^-n; sqrt(s) q, -sqrt(s) q; q, -q^(n+1)).
/// On the integer grid the loop runs to min(x, n); off-grid the q^-n slot
/// still terminates the sum.
QReal eval_D_series(unsigned n, const MuPoint& point, const FamilySpec& spec,
                    const PrecisionContext& ctx);

/// D_0 .. D_N at an arbitrary real mu plus the largest |intermediate| seen.
struct RecurrenceTrace {
  std::vector<QReal> values;
  QReal max_intermediate;
};

RecurrenceTrace eval_D_all(unsigned N, const QReal& mu, const FamilySpec& spec,
                           const PrecisionContext& ctx);

/// D_n^(s) as a polynomial in mu via the three-term recurrence.
/// DegenerateCoefficient if 1 - s q^(2j+2) vanishes for some j < n.
QReal eval_D_recurrence(unsigned n, const QReal& mu, const FamilySpec& spec,
                        const PrecisionContext& ctx);

// -- shared ----------------------------------------------------------------

/// P_0 .. P_N at x for the Hermite or dual family (recurrence route).
std::vector<QReal> eval_family_all(const FamilySpec& spec, unsigned N, const QReal& x,
                                   const PrecisionContext& ctx);

/// Constants K_n with |P_n(x)| <= K_n max(1,|x|)^n for every real x, built
/// from absolute recurrence coefficients.
std::vector<QReal> value_bound_constants(const FamilySpec& spec, unsigned N,
                                         const PrecisionContext& ctx);

}  // namespace qorth
