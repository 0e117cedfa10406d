#pragma once

// Gram matrices of a polynomial family against a discrete measure, with a
// certified bound on the part of the support left out of the sum.

#include <string>
#include <vector>

#include <json.hpp>

#include "qorth/measures.hpp"

namespace qorth {

struct TruncationRecord {
  long m_lo = 0;
  long m_hi = 0;
  QReal certified_tail_bound;  // bound on |omitted part| of every entry
};

struct GramReport {
  FamilySpec family;
  MeasureDescriptor measure;
  unsigned N = 0;
  unsigned bits = 0;
  long tol_exp = 0;
  std::vector<std::vector<QReal>> gram;
  std::vector<QReal> expected_diag;
  QReal off_diag_max;     // max |G[n][n']| / sqrt(E_n E_n'), n != n'
  QReal diag_rel_err_max; // max |G[n][n] - E_n| / |E_n|
  TruncationRecord truncation;

  bool pass() const;
};

struct GramOptions {
  unsigned threads = 0;   // 0: hardware concurrency
  long extra_margin = 0;  // widen the certified window by this many atoms per side
};

/// Throws IncompatiblePair unless the family is the one the measure
/// orthogonalizes (h with the h extremal measure, D^(s) with the base measure
/// of the same s, D^(q^-1) and D^(q) with their extremal measures).
void require_compatible(const FamilySpec& family, const DiscreteMeasure& measure);

/// Assembles gram[n][n'] = sum_m w_m P_n(x_m) P_n'(x_m) for n, n' <= N.
/// The m-window grows from [-M0, M0] (M0 = ceil(sqrt(bits))) until the
/// a-priori tail bound is below tol * min(1, min E_n) / 4.
/// TruncationFailure if that needs more than max_terms atoms.
GramReport gram_matrix(const FamilySpec& family, const DiscreteMeasure& measure, unsigned N,
                       const PrecisionContext& ctx, const GramOptions& opts = {});

/// Ordered JSON; numbers are decimal strings with ctx.output_digits() digits.
nlohmann::ordered_json to_json(const GramReport& report);
GramReport gram_report_from_json(const nlohmann::ordered_json& j);

/// Header plus one row per matrix entry: n,n_prime,value,expected.
std::string to_csv(const GramReport& report);

}  // namespace qorth
