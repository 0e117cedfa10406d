#include "qorth/gram.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

namespace qorth {

namespace {

bool close(const QReal& x, const QReal& y, const PrecisionContext& ctx) {
  const QReal slack = QReal::exp2i(-static_cast<long>(ctx.bits() / 2));
  return abs(x - y) <= slack * max(QReal(1), abs(y));
}

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, jobs) on a fixed round-robin split; each index
// is owned by exactly one worker so results do not depend on scheduling.
template <class Body>
void parallel_for(std::size_t jobs, unsigned threads, const PrecisionContext& ctx, Body body) {
  const unsigned workers = worker_count(threads, jobs);
  if (workers <= 1) {
    PrecisionScope scope(ctx);
    for (std::size_t i = 0; i < jobs; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          PrecisionScope scope(ctx);  // MPFR default precision is per thread
          for (std::size_t i = w; i < jobs; i += workers) body(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct Window {
  long lo;
  long hi;
  QReal bound;
};

// Geometric tail bound for the atoms strictly beyond `edge` in direction dir,
// or nullopt while the majorant ratio there is not yet below 1/2.
std::optional<QReal> side_tail(const DiscreteMeasure& measure, long edge, int dir,
                               unsigned degree, const QReal& scale) {
  const long first = edge + dir;
  const QReal r = measure.majorant_ratio(first, degree, dir);
  if (!(r < QReal::exp2i(-1))) return std::nullopt;
  return scale * measure.majorant(first, degree) / (QReal(1) - r);
}

Window certify_window(const DiscreteMeasure& measure, unsigned N, const QReal& kmax,
                      const QReal& target, long margin, const PrecisionContext& ctx) {
  PrecisionScope scope(ctx);
  const long m0 = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(ctx.bits()))));
  const bool two = measure.two_sided();
  Window w{two ? -m0 : 0, m0, QReal(0)};
  const unsigned degree = 2 * N;
  const QReal scale = kmax * kmax;
  const auto limit = static_cast<long>(ctx.max_terms());

  auto bounds = [&](long lo, long hi) {
    std::optional<QReal> up = side_tail(measure, hi, +1, degree, scale);
    std::optional<QReal> down = two ? side_tail(measure, lo, -1, degree, scale)
                                    : std::optional<QReal>(QReal(0));
    return std::pair{up, down};
  };

  for (;;) {
    auto [up, down] = bounds(w.lo, w.hi);
    const bool up_ok = up && *up < target / 2;
    const bool down_ok = down && *down < target / 2;
    if (up_ok && down_ok) break;
    if (w.hi - w.lo + 1 >= limit) {
      QReal attained(0);
      attained = (up ? *up : QReal(std::numeric_limits<double>::infinity())) +
                 (down ? *down : QReal(std::numeric_limits<double>::infinity()));
      throw TruncationFailure("gram_matrix: support window reached max_terms before the tail "
                              "bound fell below tol",
                              to_decimal(attained, 20));
    }
    if (!up_ok) ++w.hi;
    if (!down_ok) --w.lo;
  }
  w.hi += margin;
  if (two) w.lo -= margin;
  auto [up, down] = bounds(w.lo, w.hi);
  w.bound = *up + *down;
  return w;
}

}  // namespace

bool GramReport::pass() const {
  const PrecisionContext ctx(bits, tol_exp);
  return off_diag_max < ctx.tol() && diag_rel_err_max < ctx.tol();
}

void require_compatible(const FamilySpec& family, const DiscreteMeasure& measure) {
  const PrecisionContext& ctx = measure.context();
  PrecisionScope scope(ctx);
  const QReal& q = measure.q().value();
  if (!close(family.q().value(), q, ctx)) {
    throw IncompatiblePair("family and measure use different q");
  }
  const auto mismatch = [&](const std::string& wanted) {
    return IncompatiblePair("measure " + measure.name() + " orthogonalizes " + wanted +
                            ", not family " + std::string(to_string(family.kind())));
  };
  switch (measure.kind()) {
    case MeasureKind::HermiteExtremal:
      if (family.kind() != FamilyKind::QInvHermite) throw mismatch("h");
      return;
    case MeasureKind::DualUltraBase:
      if (family.kind() != FamilyKind::DualDiscreteUltra ||
          !close(family.s_value(), *measure.descriptor().s, ctx)) {
        throw mismatch("D with s = " + to_decimal(*measure.descriptor().s, 20));
      }
      return;
    case MeasureKind::DualUltraQinvExtremal:
      if (family.kind() != FamilyKind::DualDiscreteUltra ||
          !close(family.s_value(), QReal(1) / q, ctx)) {
        throw mismatch("D with s = q^-1");
      }
      return;
    case MeasureKind::DualUltraQExtremal:
      if (family.kind() != FamilyKind::DualDiscreteUltra || !close(family.s_value(), q, ctx)) {
        throw mismatch("D with s = q");
      }
      return;
  }
}

GramReport gram_matrix(const FamilySpec& family, const DiscreteMeasure& measure, unsigned N,
                       const PrecisionContext& ctx, const GramOptions& opts) {
  require_compatible(family, measure);
  if (opts.extra_margin < 0) throw PreconditionError("extra_margin must satisfy >=0");
  PrecisionScope scope(ctx);

  std::vector<QReal> expected = measure.expected_diagonal(N);
  QReal smallest(1);
  for (const auto& e : expected) smallest = min(smallest, abs(e));
  const QReal target = ldexp(ctx.tol() * smallest, -2);

  const std::vector<QReal> K = value_bound_constants(family, N, ctx);
  QReal kmax(0);
  for (const auto& k : K) kmax = max(kmax, k);

  const Window window = certify_window(measure, N, kmax, target, opts.extra_margin, ctx);

  // Atom values, one slot per index in the window.
  const std::size_t count = static_cast<std::size_t>(window.hi - window.lo + 1);
  std::vector<QReal> weights(count);
  std::vector<std::vector<QReal>> values(count);
  const auto excluded = measure.excluded_index();
  parallel_for(count, opts.threads, ctx, [&](std::size_t i) {
    const long m = window.lo + static_cast<long>(i);
    if (excluded && *excluded == m) {
      weights[i] = QReal(0);
      values[i].assign(N + 1, QReal(0));
      return;
    }
    Atom atom = measure.atom(m);
    weights[i] = std::move(atom.weight);
    values[i] = eval_family_all(family, N, atom.node, ctx);
  });

  // Upper triangle, each entry summed in increasing m.
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned n = 0; n <= N; ++n) {
    for (unsigned k = n; k <= N; ++k) pairs.emplace_back(n, k);
  }
  std::vector<QReal> sums(pairs.size());
  parallel_for(pairs.size(), opts.threads, ctx, [&](std::size_t p) {
    const auto [n, k] = pairs[p];
    QReal acc(0);
    for (std::size_t i = 0; i < count; ++i) {
      if (weights[i].is_zero()) continue;
      acc += weights[i] * values[i][n] * values[i][k];
    }
    sums[p] = std::move(acc);
  });

  std::vector<std::vector<QReal>> gram(N + 1, std::vector<QReal>(N + 1));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [n, k] = pairs[p];
    gram[n][k] = sums[p];
    gram[k][n] = sums[p];
  }

  QReal off(0), diag(0);
  for (unsigned n = 0; n <= N; ++n) {
    diag = max(diag, abs(gram[n][n] - expected[n]) / abs(expected[n]));
    for (unsigned k = 0; k <= N; ++k) {
      if (k == n) continue;
      off = max(off, abs(gram[n][k]) / sqrt(abs(expected[n] * expected[k])));
    }
  }

  return GramReport{family,
                    measure.descriptor(),
                    N,
                    ctx.bits(),
                    ctx.tol_exp(),
                    std::move(gram),
                    std::move(expected),
                    std::move(off),
                    std::move(diag),
                    TruncationRecord{window.lo, window.hi, window.bound}};
}

// ---------------------------------------------------------------------------

nlohmann::ordered_json to_json(const GramReport& r) {
  const PrecisionContext ctx(r.bits, r.tol_exp);
  PrecisionScope scope(ctx);
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(r.family.kind()));
  j["measure"] = std::string(to_string(r.measure.kind));
  j["q"] = render(r.measure.q, ctx);
  const auto& s = r.family.s() ? r.family.s() : r.measure.s;
  j["s"] = s ? nlohmann::ordered_json(render(*s, ctx)) : nlohmann::ordered_json(nullptr);
  j["a"] = r.measure.a ? nlohmann::ordered_json(render(*r.measure.a, ctx))
                       : nlohmann::ordered_json(nullptr);
  j["parity"] = r.measure.parity ? nlohmann::ordered_json(std::string(to_string(*r.measure.parity)))
                                 : nlohmann::ordered_json(nullptr);
  j["N"] = r.N;
  j["bits"] = r.bits;
  j["tol_exp"] = r.tol_exp;
  nlohmann::ordered_json gram = nlohmann::ordered_json::array();
  for (const auto& row : r.gram) {
    for (const auto& v : row) gram.push_back(render(v, ctx));
  }
  j["gram"] = std::move(gram);
  nlohmann::ordered_json diag = nlohmann::ordered_json::array();
  for (const auto& v : r.expected_diag) diag.push_back(render(v, ctx));
  j["expected_diag"] = std::move(diag);
  j["off_diag_max"] = render(r.off_diag_max, ctx);
  j["diag_rel_err_max"] = render(r.diag_rel_err_max, ctx);
  j["m_window"] = {r.truncation.m_lo, r.truncation.m_hi};
  j["tail_bound"] = render(r.truncation.certified_tail_bound, ctx);
  j["pass"] = r.pass();
  return j;
}

GramReport gram_report_from_json(const nlohmann::ordered_json& j) {
  try {
    const PrecisionContext ctx(j.at("bits").get<unsigned>(), j.at("tol_exp").get<long>());
    PrecisionScope scope(ctx);
    const auto dec = [&](const nlohmann::ordered_json& v, std::string_view what) {
      return parse_decimal(v.get<std::string>(), ctx, what);
    };
    const auto opt = [&](const char* key) -> std::optional<QReal> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return dec(j.at(key), key);
    };

    const QParam q(dec(j.at("q"), "q"));
    const std::optional<QReal> s = opt("s");
    const std::optional<QReal> a = opt("a");
    const FamilyKind fk = family_kind_from_string(j.at("family").get<std::string>());
    FamilySpec family = fk == FamilyKind::QInvHermite ? FamilySpec::q_inv_hermite(q)
                        : fk == FamilyKind::DualDiscreteUltra
                            ? FamilySpec::dual_discrete_ultra(q, s.value())
                            : throw PreconditionError("gram reports carry families h or D");

    MeasureDescriptor measure{measure_kind_from_string(j.at("measure").get<std::string>()),
                              q.value(), std::nullopt, a, std::nullopt};
    if (measure.kind == MeasureKind::DualUltraBase) {
      measure.s = s;
      measure.parity = parity_from_string(j.at("parity").get<std::string>());
    }

    const unsigned N = j.at("N").get<unsigned>();
    const auto& flat = j.at("gram");
    if (flat.size() != static_cast<std::size_t>(N + 1) * (N + 1)) {
      throw PreconditionError("gram must hold (N+1)^2 entries");
    }
    std::vector<std::vector<QReal>> gram(N + 1, std::vector<QReal>(N + 1));
    for (unsigned n = 0; n <= N; ++n) {
      for (unsigned k = 0; k <= N; ++k) gram[n][k] = dec(flat.at(n * (N + 1) + k), "gram");
    }
    std::vector<QReal> expected;
    for (const auto& v : j.at("expected_diag")) expected.push_back(dec(v, "expected_diag"));

    const auto& window = j.at("m_window");
    return GramReport{std::move(family),
                      std::move(measure),
                      N,
                      ctx.bits(),
                      ctx.tol_exp(),
                      std::move(gram),
                      std::move(expected),
                      dec(j.at("off_diag_max"), "off_diag_max"),
                      dec(j.at("diag_rel_err_max"), "diag_rel_err_max"),
                      TruncationRecord{window.at(0).get<long>(), window.at(1).get<long>(),
                                       dec(j.at("tail_bound"), "tail_bound")}};
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed gram report: ") + e.what());
  }
}

std::string to_csv(const GramReport& r) {
  const PrecisionContext ctx(r.bits, r.tol_exp);
  PrecisionScope scope(ctx);
  std::ostringstream out;
  out << "n,n_prime,value,expected\n";
  for (std::size_t n = 0; n < r.gram.size(); ++n) {
    for (std::size_t k = 0; k < r.gram.size(); ++k) {
      out << n << ',' << k << ',' << render(r.gram[n][k], ctx) << ','
          << (n == k ? render(r.expected_diag[n], ctx) : std::string("0")) << '\n';
    }
  }
  return out.str();
}

}  // namespace qorth
