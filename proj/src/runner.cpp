#include "qorth/runner.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qorth/identities.hpp"

namespace qorth {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_of(const RunConfig& config, const char* fallback) {
  const std::string f = config.output.empty() ? fallback : config.output;
  if (f != "json" && f != "csv" && f != "pretty") {
    throw PreconditionError("output must be one of json, csv, pretty; got '" + f + "'");
  }
  return f;
}

std::string short_decimal(const QReal& x) { return to_decimal(x, 6); }

struct Session {
  PrecisionContext ctx;
  PrecisionScope scope;
  QParam q;

  explicit Session(const RunConfig& c)
      : ctx(c.bits, c.tol_exp), scope(ctx), q(parse_decimal(c.q, ctx, "q")) {}

  QReal decimal(const std::string& text, std::string_view what) const {
    return parse_decimal(text, ctx, what);
  }

  QReal s(const RunConfig& c) const {
    if (!c.s_mode.empty() && !c.s.empty()) {
      throw PreconditionError("give either --s or --s-mode, not both");
    }
    if (c.s_mode == "qinv") return QReal(1) / q.value();
    if (c.s_mode == "q") return q.value();
    if (!c.s_mode.empty()) {
      throw PreconditionError("s-mode must be qinv or q; got '" + c.s_mode + "'");
    }
    if (c.s.empty()) throw PreconditionError("s is required (use --s or --s-mode qinv|q)");
    return decimal(c.s, "s");
  }

  QReal a(const RunConfig& c) const {
    return c.a.empty() || c.a == "q" ? q.value() : decimal(c.a, "a");
  }
};

DiscreteMeasure build_measure(const RunConfig& c, const Session& s) {
  const MeasureKind kind = measure_kind_from_string(c.measure);
  switch (kind) {
    case MeasureKind::HermiteExtremal:
      return DiscreteMeasure::hermite_extremal(s.q, s.a(c), s.ctx);
    case MeasureKind::DualUltraBase:
      return DiscreteMeasure::dual_ultra_base(s.q, s.s(c), parity_from_string(c.parity), s.ctx);
    case MeasureKind::DualUltraQinvExtremal:
      return DiscreteMeasure::dual_qinv_extremal(s.q, s.a(c), s.ctx);
    case MeasureKind::DualUltraQExtremal:
      return DiscreteMeasure::dual_q_extremal(s.q, s.a(c), s.ctx);
  }
  throw PreconditionError("unknown measure");
}

FamilySpec build_family(const RunConfig& c, const Session& s) {
  switch (family_kind_from_string(c.family)) {
    case FamilyKind::QInvHermite: return FamilySpec::q_inv_hermite(s.q);
    case FamilyKind::TildeEvenHermite: return FamilySpec::tilde_even_hermite(s.q);
    case FamilyKind::DiscreteUltra: return FamilySpec::discrete_ultra(s.q, s.s(c));
    case FamilyKind::DualDiscreteUltra: return FamilySpec::dual_discrete_ultra(s.q, s.s(c));
  }
  throw PreconditionError("unknown family");
}

std::string pretty_gram(const GramReport& r) {
  std::ostringstream out;
  out << "family " << to_string(r.family.kind()) << ", measure " << to_string(r.measure.kind)
      << ", N=" << r.N << ", bits=" << r.bits << ", tol=2^-" << r.tol_exp << "\n";
  out << "m window [" << r.truncation.m_lo << ", " << r.truncation.m_hi << "], tail bound "
      << short_decimal(r.truncation.certified_tail_bound) << "\n";
  for (std::size_t n = 0; n < r.gram.size(); ++n) {
    out << "  ";
    for (std::size_t k = 0; k < r.gram.size(); ++k) {
      out << (k ? " " : "") << to_decimal(r.gram[n][k], 8);
    }
    out << "\n";
  }
  out << "off_diag_max " << short_decimal(r.off_diag_max) << "\n";
  out << "diag_rel_err_max " << short_decimal(r.diag_rel_err_max) << "\n";
  out << (r.pass() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

}  // namespace

RunResult cmd_eval(const RunConfig& c) {
  const std::string format = format_of(c, "pretty");
  const Session s(c);
  const int given = (c.x ? 1 : 0) + (c.phi ? 1 : 0) + (c.mu ? 1 : 0);
  if (given != 1) throw PreconditionError("exactly one of --x, --phi, --mu is required");

  RunConfig named = c;
  if (named.family.empty()) named.family = "h";
  const FamilySpec spec = build_family(named, s);
  const auto wrong_point = [&](const char* allowed) {
    return PreconditionError("family " + named.family + " takes " + allowed);
  };

  std::string point_key, point_text;
  QReal value;
  switch (spec.kind()) {
    case FamilyKind::QInvHermite:
      if (c.phi) {
        value = eval_h_series(c.n, s.decimal(*c.phi, "phi"), s.q, s.ctx);
      } else if (c.x) {
        value = eval_h_recurrence(c.n, s.decimal(*c.x, "x"), s.q, s.ctx);
      } else {
        throw wrong_point("--x or --phi");
      }
      break;
    case FamilyKind::TildeEvenHermite: {
      if (c.n % 2) throw PreconditionError("n must be even for htilde (degree 2k)");
      QReal x;
      if (c.phi) {
        x = sinh(s.decimal(*c.phi, "phi"));
      } else if (c.x) {
        x = s.decimal(*c.x, "x");
      } else {
        throw wrong_point("--x or --phi");
      }
      value = eval_h_tilde(c.n / 2, x, s.q, s.ctx);
      break;
    }
    case FamilyKind::DiscreteUltra:
      if (!c.x) throw wrong_point("--x");
      value = eval_C(c.n, s.decimal(*c.x, "x"), spec, s.ctx);
      break;
    case FamilyKind::DualDiscreteUltra:
      if (c.mu) {
        value = eval_D_recurrence(c.n, s.decimal(*c.mu, "mu"), spec, s.ctx);
      } else if (c.x) {
        const QReal x = s.decimal(*c.x, "x");
        const bool integral = x >= 0 && floor(x) == x;
        const MuPoint p = integral ? MuPoint::on_grid(x.to_long(), spec.s_value(), s.q, s.ctx)
                                   : MuPoint::at(x, spec.s_value(), s.q, s.ctx);
        value = eval_D_series(c.n, p, spec, s.ctx);
      } else {
        throw wrong_point("--x or --mu");
      }
      break;
  }
  point_key = c.x ? "x" : c.phi ? "phi" : "mu";
  point_text = c.x ? *c.x : c.phi ? *c.phi : *c.mu;
  const std::string rendered = render(value, s.ctx);

  if (format == "pretty") return {0, rendered + "\n"};
  if (format == "csv") {
    return {0, "family,n," + point_key + ",value\n" + std::string(to_string(spec.kind())) + "," +
                   std::to_string(c.n) + "," + point_text + "," + rendered + "\n"};
  }
  ordered_json j;
  j["family"] = std::string(to_string(spec.kind()));
  j["n"] = c.n;
  j["q"] = render(s.q.value(), s.ctx);
  j["s"] = spec.s() ? ordered_json(render(*spec.s(), s.ctx)) : ordered_json(nullptr);
  j[point_key] = point_text;
  j["bits"] = s.ctx.bits();
  j["value"] = rendered;
  return {0, j.dump(2) + "\n"};
}

RunResult cmd_gram(const RunConfig& c) {
  const std::string format = format_of(c, "json");
  const Session s(c);
  const DiscreteMeasure measure = build_measure(c, s);
  const FamilySpec family = c.family.empty() ? measure.natural_family() : build_family(c, s);
  const GramReport report = gram_matrix(family, measure, c.N, s.ctx, GramOptions{c.threads, 0});
  const int code = report.pass() ? 0 : kExitCheckFailed;
  if (format == "pretty") return {code, pretty_gram(report)};
  if (format == "csv") return {code, to_csv(report)};
  return {code, to_json(report).dump(2) + "\n"};
}

RunResult cmd_verify(const RunConfig& c) {
  if (c.list) {
    std::string out;
    for (const auto& id : identity_ids()) out += id + "\n";
    return {0, out};
  }
  const std::string format = format_of(c, "pretty");
  const Session s(c);
  SuiteOptions opts;
  opts.k_max = c.k_max;
  opts.only = c.only;
  opts.skip = c.skip;
  const auto reports = run_suite(s.q, s.ctx, opts);
  const bool ok = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  const int code = ok ? 0 : kExitCheckFailed;

  if (format == "json") return {code, to_json(reports).dump(2) + "\n"};
  std::ostringstream out;
  if (format == "csv") {
    out << "id,pass,max_residual\n";
    for (const auto& r : reports) {
      out << r.id << ',' << (r.pass ? "true" : "false") << ',' << to_decimal(r.max_residual, 10)
          << '\n';
    }
    return {code, out.str()};
  }
  for (const auto& r : reports) {
    out << (r.pass ? "PASS " : "FAIL ") << r.id << "  max_residual " << short_decimal(r.max_residual)
        << "  [" << r.sample_grid << "]\n";
    for (const auto& comp : r.components) {
      if (comp.pass && !r.pass) continue;
      if (!comp.pass || comp.informational) {
        out << "     " << (comp.informational ? "info " : "fail ") << comp.name << ": "
            << short_decimal(comp.residual) << "\n";
      }
    }
    if (!r.note.empty()) out << "     note: " << r.note << "\n";
  }
  out << (ok ? "all checks passed" : "some checks failed") << " (tol 2^-" << s.ctx.tol_exp()
      << ")\n";
  return {code, out.str()};
}

RunResult cmd_sweep(const RunConfig& c) {
  const std::string format = format_of(c, "csv");
  const Session s(c);
  if (c.steps < 1) throw PreconditionError("steps must satisfy steps>=1");
  const QReal lo = c.a_from == "q" ? s.q.value() : s.decimal(c.a_from, "a-from");
  const QReal hi = c.a_to == "q" ? s.q.value() : s.decimal(c.a_to, "a-to");
  if (!(lo >= s.q.value()) || !(hi < 1) || !(lo <= hi)) {
    throw PreconditionError("a range must satisfy q<=a-from<=a-to<1");
  }

  struct Row {
    QReal a;
    GramReport report;
    std::string hash;
  };
  std::vector<Row> rows;
  const long window = 20;
  for (unsigned i = 0; i < c.steps; ++i) {
    const QReal a = c.steps == 1 ? lo : lo + (hi - lo) * QReal(static_cast<long>(i)) /
                                                 QReal(static_cast<long>(c.steps - 1));
    const auto measure = DiscreteMeasure::hermite_extremal(s.q, a, s.ctx);
    rows.push_back({a,
                    gram_matrix(measure.natural_family(), measure, c.N, s.ctx,
                                GramOptions{c.threads, 0}),
                    hermite_node_hash(a, s.q, window, s.ctx)});
  }
  std::set<std::string> hashes;
  for (const auto& r : rows) hashes.insert(r.hash);
  const bool distinct = hashes.size() == rows.size();
  const bool all_pass =
      std::all_of(rows.begin(), rows.end(), [](const Row& r) { return r.report.pass(); });
  const int code = distinct && all_pass ? 0 : kExitCheckFailed;

  if (format == "json") {
    ordered_json j;
    j["q"] = render(s.q.value(), s.ctx);
    j["N"] = c.N;
    j["bits"] = s.ctx.bits();
    j["tol_exp"] = s.ctx.tol_exp();
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) {
      arr.push_back({{"a", render(r.a, s.ctx)},
                     {"off_diag_max", render(r.report.off_diag_max, s.ctx)},
                     {"diag_rel_err_max", render(r.report.diag_rel_err_max, s.ctx)},
                     {"node_hash", r.hash},
                     {"pass", r.report.pass()}});
    }
    j["rows"] = std::move(arr);
    j["distinct_node_sets"] = distinct;
    return {code, j.dump(2) + "\n"};
  }
  std::ostringstream out;
  if (format == "csv") {
    out << "a,off_diag_max,diag_rel_err_max,node_hash\n";
    for (const auto& r : rows) {
      out << render(r.a, s.ctx) << ',' << render(r.report.off_diag_max, s.ctx) << ','
          << render(r.report.diag_rel_err_max, s.ctx) << ',' << r.hash << '\n';
    }
    return {code, out.str()};
  }
  for (const auto& r : rows) {
    out << "a=" << to_decimal(r.a, 12) << "  off " << short_decimal(r.report.off_diag_max)
        << "  diag " << short_decimal(r.report.diag_rel_err_max) << "  nodes " << r.hash << "  "
        << (r.report.pass() ? "PASS" : "FAIL") << "\n";
  }
  out << (distinct ? "node sets pairwise distinct" : "repeated node set") << "\n";
  return {code, out.str()};
}

RunResult run(const RunConfig& config) {
  try {
    if (config.command == "eval") return cmd_eval(config);
    if (config.command == "gram") return cmd_gram(config);
    if (config.command == "verify") return cmd_verify(config);
    if (config.command == "sweep") return cmd_sweep(config);
    return {kExitUsage, "error: unknown command '" + config.command + "'\n"};
  } catch (const PreconditionError& e) {
    return {kExitUsage, std::string("usage error: ") + e.what() + "\n"};
  } catch (const IncompatiblePair& e) {
    return {kExitUsage, std::string("usage error: ") + e.what() + "\n"};
  } catch (const TruncationFailure& e) {
    return {kExitNumeric, std::string("error: ") + e.what() + " (attained bound " +
                              e.attained_bound() + ")\n"};
  } catch (const Error& e) {
    return {kExitNumeric, std::string("error: ") + e.what() + "\n"};
  }
}

}  // namespace qorth
