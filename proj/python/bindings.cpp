#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zlab/commands.hpp"

namespace py = pybind11;
using namespace zlab;

namespace {

FunctionSpec spec_named(const std::string& name, double tau)
{
    RunConfig c;
    c.function = name;
    c.tau = tau;
    return spec_from_config(c);
}

py::dict zero_dict(const ZeroRecord& z)
{
    py::dict d;
    d["rho"] = z.rho;
    d["multiplicity"] = z.multiplicity;
    d["residual"] = z.residual;
    d["method"] = to_string(z.method);
    return d;
}

} // namespace

PYBIND11_MODULE(_zlab, m)
{
    m.doc() = "Zeros of zeta, L(s, psi5) and the interpolating family";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::Pole ? PyExc_ValueError
                                                                                                   : PyExc_RuntimeError,
                            e.what());
        }
    });

    m.def(
        "eval",
        [](const std::string& f, std::complex<double> s, int deriv, double tau) {
            const EvalResult r = eval(spec_named(f, tau), s, deriv);
            return py::make_tuple(r.value, r.est_abs_error);
        },
        py::arg("f"), py::arg("s"), py::arg("deriv") = 0, py::arg("tau") = 0.0,
        "(value, estimated absolute error) of F^(deriv)(s)");

    m.def(
        "fe_residual", [](const std::string& f, std::complex<double> s, double tau) { return fe_residual(spec_named(f, tau), s); },
        py::arg("f"), py::arg("s"), py::arg("tau") = 0.0);

    m.def(
        "count",
        [](const std::string& f, std::array<double, 4> rect, double tau, const std::string& which) {
            const Rect r{rect[0], rect[1], rect[2], rect[3]};
            return winding_count(make_target(spec_named(f, tau), which_from_string(which)), r.contour());
        },
        py::arg("f"), py::arg("rect"), py::arg("tau") = 0.0, py::arg("which") = "F");

    m.def(
        "zeros",
        [](const std::string& f, std::array<double, 4> rect, double tau, const std::string& which, int threads) {
            ScanOptions so;
            so.strips = 8;
            so.threads = threads;
            const Rect r{rect[0], rect[1], rect[2], rect[3]};
            py::list out;
            for (const auto& z : scan_zeros(make_target(spec_named(f, tau), which_from_string(which)), r, so))
                out.append(zero_dict(z));
            return out;
        },
        py::arg("f"), py::arg("rect"), py::arg("tau") = 0.0, py::arg("which") = "F", py::arg("threads") = 1);

    m.def(
        "speiser_compare",
        [](const std::string& f, std::complex<double> s0, double r, double tau) {
            const SpeiserReport rep = speiser_compare(spec_named(f, tau), s0, r);
            return py::make_tuple(rep.n_F, rep.n_Fprime);
        },
        py::arg("f"), py::arg("s0"), py::arg("r"), py::arg("tau") = 0.0, "(n_F, n_Fprime) in the left half-disk");

    m.def(
        "trace",
        [](std::complex<double> rho, double tau_start, double tau_end, const std::string& which) {
            const Trajectory tr = trace(*family_f(), which_from_string(which), rho, tau_start, tau_end);
            py::dict d;
            std::vector<std::pair<double, std::complex<double>>> samples;
            for (const auto& s : tr.samples) samples.emplace_back(s.tau, s.rho);
            d["samples"] = samples;
            d["status"] = to_string(tr.status);
            d["reason"] = tr.reason;
            d["tau_star"] = tr.tau_star;
            d["rho_star"] = tr.rho_star;
            return d;
        },
        py::arg("rho"), py::arg("tau_start") = 0.0, py::arg("tau_end") = 1.0, py::arg("which") = "F");

    m.def(
        "run",
        [](const std::string& config_json) {
            const RunConfig c = run_config_from_json(Json::parse(config_json));
            std::ostringstream os;
            run_command(c, {}, os);
            return os.str();
        },
        py::arg("config_json"), "Runs a CLI command from a RunConfig JSON document and returns its output");

    m.def("default_config", [](const std::string& command) {
        RunConfig c;
        c.command = command;
        if (command == "trace" || command == "census") c.function = "family";
        return to_json(c).dump();
    });
}
