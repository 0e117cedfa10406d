#include "qorth/qreal.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace qorth {

namespace {

mpfr_prec_t wider(const QReal& a, const QReal& b) {
  return std::max(a.precision(), b.precision());
}

template <typename Fn>
QReal unary(const QReal& x, Fn fn) {
  QReal r = QReal::with_precision(x.precision());
  fn(r.get(), x.get(), MPFR_RNDN);
  return r;
}

}  // namespace

QReal::QReal() {
  mpfr_init(v_);
  mpfr_set_zero(v_, 1);
}

QReal::QReal(int v) : QReal(static_cast<long>(v)) {}

QReal::QReal(long v) {
  mpfr_init(v_);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

QReal::QReal(double v) {
  mpfr_init(v_);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

QReal::QReal(const QReal& other) {
  mpfr_init2(v_, other.precision());
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

QReal::QReal(QReal&& other) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, other.v_);
}

QReal::~QReal() { mpfr_clear(v_); }

QReal& QReal::operator=(const QReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

QReal& QReal::operator=(QReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

QReal QReal::from_string(std::string_view text, mpfr_prec_t prec) {
  QReal r = with_precision(prec == 0 ? mpfr_get_default_prec() : prec);
  std::string buf(text);
  if (buf.empty() || mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0) {
    throw std::invalid_argument("not a decimal number: '" + buf + "'");
  }
  return r;
}

QReal QReal::with_precision(mpfr_prec_t prec) {
  QReal r;
  mpfr_set_prec(r.v_, prec);
  mpfr_set_zero(r.v_, 1);
  return r;
}

QReal QReal::exp2i(long e) {
  QReal r(1);
  mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
  return r;
}

QReal& QReal::operator+=(const QReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(v_, rhs.precision(), MPFR_RNDN);
  mpfr_add(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

QReal& QReal::operator-=(const QReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(v_, rhs.precision(), MPFR_RNDN);
  mpfr_sub(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

QReal& QReal::operator*=(const QReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(v_, rhs.precision(), MPFR_RNDN);
  mpfr_mul(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

QReal& QReal::operator/=(const QReal& rhs) {
  if (rhs.precision() > precision()) mpfr_prec_round(v_, rhs.precision(), MPFR_RNDN);
  mpfr_div(v_, v_, rhs.v_, MPFR_RNDN);
  return *this;
}

QReal QReal::operator-() const { return unary(*this, mpfr_neg); }

QReal operator+(const QReal& a, const QReal& b) {
  QReal r = QReal::with_precision(wider(a, b));
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

QReal operator-(const QReal& a, const QReal& b) {
  QReal r = QReal::with_precision(wider(a, b));
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

QReal operator*(const QReal& a, const QReal& b) {
  QReal r = QReal::with_precision(wider(a, b));
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

QReal operator/(const QReal& a, const QReal& b) {
  QReal r = QReal::with_precision(wider(a, b));
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const QReal& a, const QReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

QReal rounded(const QReal& x, mpfr_prec_t prec) {
  QReal out = QReal::with_precision(prec);
  mpfr_set(out.get(), x.get(), MPFR_RNDN);
  return out;
}

QReal abs(const QReal& x) { return unary(x, mpfr_abs); }
QReal sqrt(const QReal& x) { return unary(x, mpfr_sqrt); }
QReal exp(const QReal& x) { return unary(x, mpfr_exp); }
QReal log(const QReal& x) { return unary(x, mpfr_log); }
QReal log2(const QReal& x) { return unary(x, mpfr_log2); }
QReal sinh(const QReal& x) { return unary(x, mpfr_sinh); }
QReal cosh(const QReal& x) { return unary(x, mpfr_cosh); }
QReal asinh(const QReal& x) { return unary(x, mpfr_asinh); }

QReal floor(const QReal& x) {
  QReal r = QReal::with_precision(x.precision());
  mpfr_floor(r.get(), x.get());
  return r;
}

QReal ceil(const QReal& x) {
  QReal r = QReal::with_precision(x.precision());
  mpfr_ceil(r.get(), x.get());
  return r;
}

QReal pow(const QReal& x, long n) {
  QReal r = QReal::with_precision(x.precision());
  mpfr_pow_si(r.get(), x.get(), n, MPFR_RNDN);
  return r;
}

QReal pow(const QReal& x, const QReal& y) {
  QReal r = QReal::with_precision(std::max(x.precision(), y.precision()));
  mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN);
  return r;
}

QReal ldexp(const QReal& x, long e) {
  QReal r = QReal::with_precision(x.precision());
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

QReal max(const QReal& a, const QReal& b) { return a < b ? b : a; }
QReal min(const QReal& a, const QReal& b) { return b < a ? b : a; }

std::string to_decimal(const QReal& x, int digits) {
  if (mpfr_nan_p(x.get())) return "nan";
  if (mpfr_inf_p(x.get())) return x.sign() < 0 ? "-inf" : "inf";
  if (x.is_zero()) return "0";

  mpfr_exp_t e = 0;
  char* raw = mpfr_get_str(nullptr, &e, 10, static_cast<std::size_t>(std::max(digits, 2)),
                           x.get(), MPFR_RNDN);
  std::string mant(raw);
  mpfr_free_str(raw);

  std::string sign;
  if (mant.front() == '-') {
    sign = "-";
    mant.erase(0, 1);
  }
  while (mant.size() > 1 && mant.back() == '0') mant.pop_back();

  // value = 0.<mant> * 10^e
  const long n = static_cast<long>(mant.size());
  std::string out;
  if (e > 0 && e <= 30) {
    if (n <= e) {
      out = mant + std::string(static_cast<std::size_t>(e - n), '0');
    } else {
      out = mant.substr(0, static_cast<std::size_t>(e)) + "." + mant.substr(static_cast<std::size_t>(e));
    }
  } else if (e <= 0 && e > -5) {
    out = "0." + std::string(static_cast<std::size_t>(-e), '0') + mant;
  } else {
    out = mant.substr(0, 1);
    if (n > 1) out += "." + mant.substr(1);
    const long exp10 = static_cast<long>(e) - 1;
    out += (exp10 < 0 ? "e-" : "e+");
    const long ae = exp10 < 0 ? -exp10 : exp10;
    if (ae < 10) out += "0";
    out += std::to_string(ae);
  }
  return sign + out;
}

}  // namespace qorth
