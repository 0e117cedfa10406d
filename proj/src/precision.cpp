#include "qorth/precision.hpp"

namespace qorth {

PrecisionContext::PrecisionContext(unsigned bits, long tol_exp, std::size_t max_terms)
    : bits_(bits), tol_exp_(tol_exp), max_terms_(max_terms) {
  if (bits < 64) throw PreconditionError("bits must satisfy bits >= 64");
  if (tol_exp < 1) throw PreconditionError("tol must satisfy 0 < tol < 1 (tol_exp >= 1)");
  if (max_terms < 1) throw PreconditionError("max_terms must satisfy max_terms >= 1");
  PrecisionScope scope(bits);
  tol_ = QReal::exp2i(-tol_exp);
}

PrecisionContext PrecisionContext::doubled() const {
  return PrecisionContext(bits_ * 2, tol_exp_, max_terms_);
}

PrecisionContext PrecisionContext::full_precision() const {
  const long tight = static_cast<long>(bits_) - 8;
  return PrecisionContext(bits_, tol_exp_ > tight ? tol_exp_ : tight, max_terms_);
}

QReal PrecisionContext::zero_threshold() const {
  PrecisionScope scope(*this);
  return QReal::exp2i(-static_cast<long>(bits_) + 8);
}

PrecisionScope::PrecisionScope(const PrecisionContext& ctx) : PrecisionScope(ctx.bits()) {}

PrecisionScope::PrecisionScope(unsigned bits) : saved_(mpfr_get_default_prec()) {
  mpfr_set_default_prec(static_cast<mpfr_prec_t>(bits));
}

PrecisionScope::~PrecisionScope() { mpfr_set_default_prec(saved_); }

QReal parse_decimal(std::string_view text, const PrecisionContext& ctx, std::string_view what) {
  try {
    return QReal::from_string(text, static_cast<mpfr_prec_t>(ctx.bits()));
  } catch (const std::invalid_argument&) {
    throw PreconditionError(std::string(what) + " must be a decimal number, got '" +
                            std::string(text) + "'");
  }
}

std::string render(const QReal& x, const PrecisionContext& ctx) {
  return to_decimal(x, ctx.output_digits());
}

QParam::QParam(QReal q) : q_(std::move(q)) {
  if (!q_.is_finite() || !(q_ > 0) || !(q_ < 1)) {
    throw PreconditionError("q must satisfy 0<q<1");
  }
}

}  // namespace qorth
