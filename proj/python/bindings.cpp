// Python extension: the command layer plus the q-Pochhammer kernel.
// Decimal strings cross the boundary in both directions.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qorth/identities.hpp"
#include "qorth/qseries.hpp"
#include "qorth/runner.hpp"

namespace py = pybind11;
using namespace qorth;

namespace {

PrecisionContext context_of(unsigned bits, long tol_exp) { return PrecisionContext(bits, tol_exp); }

std::string qpoch_str(const std::string& a, const std::string& q, std::size_t n, unsigned bits,
                      long tol_exp) {
  const PrecisionContext ctx = context_of(bits, tol_exp);
  PrecisionScope scope(ctx);
  const QParam qp(parse_decimal(q, ctx, "q"));
  return render(qpoch(parse_decimal(a, ctx, "a"), qp, n, ctx), ctx);
}

std::string qpoch_inf_str(const std::string& a, const std::string& q, unsigned bits,
                          long tol_exp) {
  const PrecisionContext ctx = context_of(bits, tol_exp);
  PrecisionScope scope(ctx);
  const QParam qp(parse_decimal(q, ctx, "q"));
  return render(qpoch_inf(parse_decimal(a, ctx, "a"), qp, ctx), ctx);
}

py::tuple to_tuple(const RunResult& r) { return py::make_tuple(r.exit_code, r.text); }

}  // namespace

PYBIND11_MODULE(_qorth, m) {
  m.doc() = "q-orthogonal polynomials at configurable precision";

  auto base = py::register_exception<Error>(m, "QorthError", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<TruncationFailure>(m, "TruncationFailure", base.ptr());
  py::register_exception<PoleError>(m, "PoleError", base.ptr());
  py::register_exception<DegenerateCoefficient>(m, "DegenerateCoefficient", base.ptr());
  py::register_exception<IncompatiblePair>(m, "IncompatiblePair", PyExc_ValueError);
  py::register_exception<SignViolation>(m, "SignViolation", base.ptr());

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("command", &RunConfig::command)
      .def_readwrite("q", &RunConfig::q)
      .def_readwrite("s", &RunConfig::s)
      .def_readwrite("s_mode", &RunConfig::s_mode)
      .def_readwrite("a", &RunConfig::a)
      .def_readwrite("parity", &RunConfig::parity)
      .def_readwrite("family", &RunConfig::family)
      .def_readwrite("measure", &RunConfig::measure)
      .def_readwrite("n", &RunConfig::n)
      .def_readwrite("x", &RunConfig::x)
      .def_readwrite("phi", &RunConfig::phi)
      .def_readwrite("mu", &RunConfig::mu)
      .def_readwrite("N", &RunConfig::N)
      .def_readwrite("k_max", &RunConfig::k_max)
      .def_readwrite("bits", &RunConfig::bits)
      .def_readwrite("tol_exp", &RunConfig::tol_exp)
      .def_readwrite("threads", &RunConfig::threads)
      .def_readwrite("output", &RunConfig::output)
      .def_readwrite("a_from", &RunConfig::a_from)
      .def_readwrite("a_to", &RunConfig::a_to)
      .def_readwrite("steps", &RunConfig::steps)
      .def_readwrite("list", &RunConfig::list)
      .def_readwrite("only", &RunConfig::only)
      .def_readwrite("skip", &RunConfig::skip);

  // cmd_* raise on bad input; run() folds errors into an exit code instead.
  m.def("cmd_eval", [](const RunConfig& c) { return to_tuple(cmd_eval(c)); });
  m.def("cmd_gram", [](const RunConfig& c) { return to_tuple(cmd_gram(c)); });
  m.def("cmd_verify", [](const RunConfig& c) { return to_tuple(cmd_verify(c)); });
  m.def("cmd_sweep", [](const RunConfig& c) { return to_tuple(cmd_sweep(c)); });
  m.def("run", [](const RunConfig& c) { return to_tuple(run(c)); });

  m.def("identity_ids", &identity_ids);
  m.def("qpoch", &qpoch_str, py::arg("a"), py::arg("q"), py::arg("n"), py::arg("bits") = 256,
        py::arg("tol_exp") = 200);
  m.def("qpoch_inf", &qpoch_inf_str, py::arg("a"), py::arg("q"), py::arg("bits") = 256,
        py::arg("tol_exp") = 200);
}
