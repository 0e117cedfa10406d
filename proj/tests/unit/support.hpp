#pragma once

#include <string>

#include <doctest.h>

#include "qorth/precision.hpp"

namespace qorth::testing {

inline QReal dec(const std::string& text, const PrecisionContext& ctx) {
  return parse_decimal(text, ctx);
}

/// |a - b| <= tol * max(1, |b|)
inline bool near(const QReal& a, const QReal& b, const QReal& tol) {
  return abs(a - b) <= tol * max(QReal(1), abs(b));
}

inline QReal ratio(long num, long den) { return QReal(num) / QReal(den); }

}  // namespace qorth::testing
