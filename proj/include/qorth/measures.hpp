#pragma once

// Discrete orthogonality measures: the extremal family for h_n, the two base
// measures for D_n^(s), and the extremal families for D_n^(q^-1), D_n^(q).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qorth/families.hpp"

namespace qorth {

enum class MeasureKind { HermiteExtremal, DualUltraBase, DualUltraQinvExtremal, DualUltraQExtremal };
enum class Parity { Even, Odd };

std::string_view to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(std::string_view name);
std::string_view to_string(Parity parity);
Parity parity_from_string(std::string_view name);

struct Atom {
  long m = 0;
  QReal node;
  QReal weight;
};

/// Plain-data identity of a measure (what a report records).
struct MeasureDescriptor {
  MeasureKind kind;
  QReal q;
  std::optional<QReal> s;
  std::optional<QReal> a;
  std::optional<Parity> parity;
};

// -- single atoms ------------------------------------------------------------
// Each recomputes its normalization; DiscreteMeasure caches it instead.

/// node (a^-1 q^-m - a q^m)/2,
/// weight a^4m q^m(2m-1) (1 + a^2 q^2m) / [(-a^2;q)_inf (-q/a^2;q)_inf (q;q)_inf].
/// Requires q <= a < 1.
Atom hermite_extremal_weight(long m, const QReal& a, const QParam& q, const PrecisionContext& ctx);

/// Base measure for D_n^(s), 0 < s < q^-2. Even: node mu(2k;s), weight
/// (1 - s q^(4k+1)) (sq;q)_2k / [(1-sq)(q;q)_2k] q^k(2k-1); odd: node
/// mu(2k+1;s), weight (1 - s q^(4k+3)) (sq;q)_(2k+1) / [(1-sq)(q;q)_(2k+1)] q^k(2k+1).
/// The (1-sq) factor is cancelled symbolically so s = q^-1 is regular.
Atom dual_ultra_base_weight(long k, const QReal& s, Parity parity, const QParam& q,
                            const PrecisionContext& ctx);

/// Extremal measure for D_k^(q^-1): node a^-2 q^-2m + a^2 q^2m,
/// weight a^(4m+1) q^(2m^2) (a^-1 q^-m + a q^m) / Z(a), with
/// Z(a) = (-a^2;q)_inf (-q/a^2;q)_inf (q;q)_inf.
Atom dual_qinv_extremal_weight(long m, const QReal& a, const QParam& q, const PrecisionContext& ctx);

/// Extremal measure for D_k^(q): node q (a^-2 q^-2m + a^2 q^2m), weight
/// a^(4m+1) q^(2m^2) (a^-1 q^-m + a q^m) (a^-1 q^-m - a q^m)^2 / Z(a).
/// This is the weight obtained by pulling the extremal h measure back
/// through h_{2k+1} = c_k (2 sinh phi) D_k^(q); it is non-negative on all of
/// Z and vanishes only where a q^m = 1 (a = q, m = -1).
Atom dual_q_extremal_weight(long m, const QReal& a, const QParam& q, const PrecisionContext& ctx);

/// The alternative weight a^4m q^m(2m-1) (a^-2 q^-2m - a^2 q^2m), without
/// normalization. Kept only to document that it is not an orthogonality
/// weight (it changes sign at m = 0 when a > q).
QReal dual_q_extremal_alternative_weight(long m, const QReal& a, const QParam& q,
                                         const PrecisionContext& ctx);

// -- measure objects ---------------------------------------------------------

class DiscreteMeasure {
 public:
  static DiscreteMeasure hermite_extremal(QParam q, QReal a, const PrecisionContext& ctx);
  static DiscreteMeasure dual_ultra_base(QParam q, QReal s, Parity parity,
                                         const PrecisionContext& ctx);
  static DiscreteMeasure dual_qinv_extremal(QParam q, QReal a, const PrecisionContext& ctx);
  static DiscreteMeasure dual_q_extremal(QParam q, QReal a, const PrecisionContext& ctx);

  MeasureKind kind() const { return desc_.kind; }
  const MeasureDescriptor& descriptor() const { return desc_; }
  const QParam& q() const { return q_; }
  std::string name() const { return std::string(to_string(desc_.kind)); }

  /// Support is m in Z (true) or k >= 0 (false).
  bool two_sided() const { return desc_.kind != MeasureKind::DualUltraBase; }

  /// Atom carrying zero mass that is excluded from the support, if any.
  std::optional<long> excluded_index() const { return excluded_; }

  /// Weights are the unnormalized expression divided by this constant.
  const QReal& normalization() const { return normalization_; }

  /// Node and normalized weight at index m. SignViolation if the weight is
  /// not positive at a supported index.
  Atom atom(long m) const;
  QReal node(long m) const;

  /// The polynomial family this measure orthogonalizes.
  FamilySpec natural_family() const;

  /// Closed-form squared norms for degrees 0..N (normalized weights).
  std::vector<QReal> expected_diagonal(unsigned N) const;

  /// Upper bound for |weight_m| * max(1,|node_m|)^degree.
  QReal majorant(long m, unsigned degree) const;

  /// Upper bound on majorant(j+dir)/majorant(j), valid for every j at or
  /// beyond m in direction dir (+1 upward, -1 downward).
  QReal majorant_ratio(long m, unsigned degree, int dir) const;

  const PrecisionContext& context() const { return ctx_; }

 private:
  DiscreteMeasure(MeasureDescriptor desc, QParam q, const PrecisionContext& ctx);
  QReal unnormalized_weight(long m) const;
  QReal envelope(long m) const;

  MeasureDescriptor desc_;
  QParam q_;
  PrecisionContext ctx_;
  QReal normalization_;
  std::optional<long> excluded_;
};

/// (-a^2;q)_inf (-q/a^2;q)_inf (q;q)_inf.
QReal extremal_normalization(const QReal& a, const QParam& q, const PrecisionContext& ctx);

/// The variant with (-q/a;q)_inf in place of (-q/a^2;q)_inf.
QReal extremal_normalization_linear_a(const QReal& a, const QParam& q, const PrecisionContext& ctx);

/// Smallest separation between the node sets {x_m(a1)} and {x_j(a2)},
/// |x_m(a1) - x_j(a2)| / max(1, |x_m(a1)|) over m, j in [-window, window].
/// Zero iff the windows share a node.
QReal hermite_node_gap(const QReal& a1, const QReal& a2, const QParam& q, long window,
                       const PrecisionContext& ctx);

/// FNV-1a fingerprint of the rendered nodes x_m(a), m in [-window, window].
std::string hermite_node_hash(const QReal& a, const QParam& q, long window,
                              const PrecisionContext& ctx);

}  // namespace qorth
