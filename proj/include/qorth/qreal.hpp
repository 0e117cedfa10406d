#pragma once

// Extended-precision real backed by MPFR.
//
// Every value carries its own mantissa precision. Results of binary
// operations take the larger precision of the two operands; values built
// from integers or strings take the calling thread's working precision,
// which PrecisionScope (precision.hpp) sets.

#include <mpfr.h>

#include <compare>
#include <string>
#include <string_view>

namespace qorth {

class QReal {
 public:
  QReal();
  QReal(int v);   // NOLINT(google-explicit-constructor)
  QReal(long v);  // NOLINT(google-explicit-constructor)
  explicit QReal(double v);
  QReal(const QReal& other);
  QReal(QReal&& other) noexcept;
  ~QReal();

  QReal& operator=(const QReal& other);
  QReal& operator=(QReal&& other) noexcept;

  /// Parses a decimal literal ("0.5", "-1.25e-3"). Throws
  /// std::invalid_argument on malformed input.
  static QReal from_string(std::string_view text, mpfr_prec_t prec = 0);

  /// Zero with an explicit precision.
  static QReal with_precision(mpfr_prec_t prec);

  /// 2^e at the working precision.
  static QReal exp2i(long e);

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  /// floor(log2 |x|) + 1 for x != 0 (the MPFR exponent).
  long exponent() const { return mpfr_get_exp(v_); }

  QReal& operator+=(const QReal& rhs);
  QReal& operator-=(const QReal& rhs);
  QReal& operator*=(const QReal& rhs);
  QReal& operator/=(const QReal& rhs);

  QReal operator-() const;

  friend QReal operator+(const QReal& a, const QReal& b);
  friend QReal operator-(const QReal& a, const QReal& b);
  friend QReal operator*(const QReal& a, const QReal& b);
  friend QReal operator/(const QReal& a, const QReal& b);

  friend bool operator==(const QReal& a, const QReal& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }
  friend std::partial_ordering operator<=>(const QReal& a, const QReal& b);

 private:
  mpfr_t v_;
};

/// x rounded to nearest at precision prec.
QReal rounded(const QReal& x, mpfr_prec_t prec);

QReal abs(const QReal& x);
QReal sqrt(const QReal& x);
QReal exp(const QReal& x);
QReal log(const QReal& x);
QReal log2(const QReal& x);
QReal sinh(const QReal& x);
QReal cosh(const QReal& x);
QReal asinh(const QReal& x);
QReal pow(const QReal& x, long n);
QReal pow(const QReal& x, const QReal& y);
QReal ldexp(const QReal& x, long e);
QReal max(const QReal& a, const QReal& b);
QReal min(const QReal& a, const QReal& b);
QReal floor(const QReal& x);
QReal ceil(const QReal& x);

/// Renders with `digits` significant digits, trailing zeros removed.
/// Plain notation for moderate exponents, otherwise d.ddde+XX.
std::string to_decimal(const QReal& x, int digits);

}  // namespace qorth
