#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "qorth/qreal.hpp"

namespace qorth {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition does not hold (bad parameter range, malformed
/// input). The message names the violated constraint.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A series or product hit max_terms before its tail bound dropped below tol.
class TruncationFailure : public Error {
 public:
  TruncationFailure(const std::string& what, std::string attained_bound)
      : Error(what), attained_bound_(std::move(attained_bound)) {}
  const std::string& attained_bound() const { return attained_bound_; }

 private:
  std::string attained_bound_;
};

/// A denominator Pochhammer vanished before the series terminated.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Leading recurrence coefficient vanished; upward evaluation is undefined.
class DegenerateCoefficient : public Error {
 public:
  using Error::Error;
};

/// Polynomial family and measure do not belong together.
class IncompatiblePair : public Error {
 public:
  using Error::Error;
};

/// A measure produced a non-positive weight inside its declared support.
class SignViolation : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// PrecisionContext
// ---------------------------------------------------------------------------

/// Working precision, acceptance tolerance and a hard cap on series terms.
/// Immutable once built; pass by const reference.
class PrecisionContext {
 public:
  static constexpr unsigned kDefaultBits = 256;
  static constexpr long kDefaultTolExp = 200;
  static constexpr std::size_t kDefaultMaxTerms = std::size_t{1} << 18;

  /// tol = 2^-tol_exp. Throws PreconditionError unless bits >= 64,
  /// tol_exp >= 1 and max_terms >= 1.
  PrecisionContext(unsigned bits = kDefaultBits, long tol_exp = kDefaultTolExp,
                   std::size_t max_terms = kDefaultMaxTerms);

  unsigned bits() const { return bits_; }
  long tol_exp() const { return tol_exp_; }
  const QReal& tol() const { return tol_; }
  std::size_t max_terms() const { return max_terms_; }

  /// Same tolerance and term cap at twice the mantissa width.
  PrecisionContext doubled() const;

  /// Same bits with tol tightened to 2^-(bits-8) (never loosened). For
  /// constants that feed residuals, so their own truncation stays invisible.
  PrecisionContext full_precision() const;

  /// Smallest magnitude distinguishable from zero relative to O(1) terms
  /// at this precision, with a few guard bits: 2^-(bits-8).
  QReal zero_threshold() const;

  /// Significant digits for decimal output (at least bits/3).
  int output_digits() const { return static_cast<int>(bits_ / 3) + 1; }

 private:
  unsigned bits_;
  long tol_exp_;
  std::size_t max_terms_;
  QReal tol_;
};

/// Sets the calling thread's MPFR working precision for the lifetime of the
/// scope and restores the previous value on exit. Values created from
/// integers or decimal strings inside the scope carry ctx.bits().
class PrecisionScope {
 public:
  explicit PrecisionScope(const PrecisionContext& ctx);
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

/// Parses a decimal string at ctx precision; PreconditionError on bad input.
QReal parse_decimal(std::string_view text, const PrecisionContext& ctx,
                    std::string_view what = "value");

/// Decimal rendering with ctx.output_digits() significant digits.
std::string render(const QReal& x, const PrecisionContext& ctx);

// ---------------------------------------------------------------------------
// QParam
// ---------------------------------------------------------------------------

/// Base of the q-series, strictly inside (0, 1).
class QParam {
 public:
  explicit QParam(QReal q);
  const QReal& value() const { return q_; }
  operator const QReal&() const { return q_; }  // NOLINT(google-explicit-constructor)

 private:
  QReal q_;
};

}  // namespace qorth
