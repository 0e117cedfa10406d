#pragma once

// Executable checks of the identities tying h_n to D_n^(q^-1), D_n^(q) and
// to the half-lattice and extremal measures. Each check returns residuals
// relative with floor 1 unless its note says otherwise.

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qorth/gram.hpp"

namespace qorth {

struct ResidualComponent {
  std::string name;
  QReal residual;
  bool pass = false;
  /// Reported for evidence only; excluded from max_residual and pass.
  bool informational = false;
};

struct IdentityReport {
  std::string id;
  std::string sample_grid;
  QReal max_residual;
  bool pass = false;
  std::vector<ResidualComponent> components;
  std::string note;
};

/// Default phi sample points {-2, -1, -0.5, 0, 0.5, 1, 2}.
std::vector<QReal> default_phi_grid(const PrecisionContext& ctx);

/// h_2k(sinh phi) = (-1)^k q^(-k^2) (q;q^2)_k D_k^(q^-1)(e^2phi + e^-2phi).
IdentityReport check_proposition_even(unsigned k_max, const std::vector<QReal>& phi_grid,
                                      const QParam& q, const PrecisionContext& ctx);

/// h_2k+1(sinh phi) = (-1)^k q^(-k(k+1)) (q^3;q^2)_k (2 sinh phi) D_k^(q)(q e^2phi + q e^-2phi).
IdentityReport check_proposition_odd(unsigned k_max, const std::vector<QReal>& phi_grid,
                                     const QParam& q, const PrecisionContext& ctx);

/// Squared h recurrence over even degrees plus the rescaled D^(q^-1) recurrence.
IdentityReport check_even_recurrence_chain(unsigned k_max, const std::vector<QReal>& phi_grid,
                                           const QParam& q, const PrecisionContext& ctx);

/// Odd-degree analogue with the rescaled D^(q) recurrence.
IdentityReport check_odd_recurrence_chain(unsigned k_max, const std::vector<QReal>& phi_grid,
                                          const QParam& q, const PrecisionContext& ctx);

/// (q^2;q^2)_inf/(q;q^2)_inf = (-q;q)^2_inf (q;q)_inf
///   = (1/2)(-1;q)_inf (-q;q)_inf (q;q)_inf = 2q^-1 (-q^2;q)_inf (-q^-1;q)_inf (q;q)_inf.
/// Every link counts; the last one is also reported with the
/// constant q/2 as an informational component.
IdentityReport check_product_identity(const QParam& q, const PrecisionContext& ctx);

/// Half-lattice Grams built from the base measures (s = q^-1 even, s = q odd)
/// against the h Gram of the extremal measure at a = q, degrees 0..2N+1.
IdentityReport check_a_equals_q_equivalence(unsigned N, const QParam& q,
                                            const PrecisionContext& ctx);

/// h_n(x|q) = i^-n H_n(ix|q^-1) restated over the reals through coefficient
/// arrays of the continuous recurrence at p = q^-1.
IdentityReport check_h_H_connection(unsigned n_max, const std::vector<QReal>& x_grid,
                                    const QParam& q, const PrecisionContext& ctx);

/// The extremal h Gram, rescaled through the even and odd relations, equals
/// the Grams of D^(q^-1) and D^(q) under their extremal measures, entrywise.
IdentityReport check_extremal_transfer(unsigned N, const std::vector<QReal>& a_values,
                                       const QParam& q, const PrecisionContext& ctx);

/// Compares the derived extremal diagonals against both candidate constants,
/// (-q/a^2;q)_inf and (-q/a;q)_inf, and records how the alternative D^(q)
/// weight (a^-2 q^-2m - a^2 q^2m) fares as an orthogonality weight.
IdentityReport check_extremal_normalization(unsigned N, const std::vector<QReal>& a_values,
                                            const QParam& q, const PrecisionContext& ctx);

// -- suite -------------------------------------------------------------------

struct SuiteOptions {
  unsigned k_max = 6;
  unsigned equivalence_N = 6;
  unsigned transfer_N = 5;
  std::vector<std::string> only;  // empty: every check
  std::vector<std::string> skip;
};

/// Identifiers in run order.
const std::vector<std::string>& identity_ids();

/// Runs one check by id with the suite's default grids. Library errors are
/// caught and turned into a failing report carrying the message.
IdentityReport run_identity(std::string_view id, const QParam& q, const PrecisionContext& ctx,
                            const SuiteOptions& opts = {});

/// Runs the selected checks concurrently; results come back in id order.
std::vector<IdentityReport> run_suite(const QParam& q, const PrecisionContext& ctx,
                                      const SuiteOptions& opts = {});

nlohmann::ordered_json to_json(const IdentityReport& report);
nlohmann::ordered_json to_json(const std::vector<IdentityReport>& reports);

}  // namespace qorth
