// Python bindings: the suite runner plus a few exact primitives.
#include "pcris/suites.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace pcris;

namespace {

std::string run_report_json(const std::string& config_json, unsigned jobs) {
    const auto j = nlohmann::json::parse(config_json);
    RunConfig cfg;
    cfg.p = j.value("p", cfg.p);
    cfg.n = j.value("n", cfg.n);
    cfg.m = j.value("m", cfg.m);
    cfg.d = j.value("d", cfg.d);
    cfg.r = j.value("r", cfg.r);
    cfg.c = parse_cmode(j.value("c", std::string("pi")));
    if (j.contains("deg_z")) cfg.D_z = j["deg_z"].get<std::uint32_t>();
    if (j.contains("deg_x")) cfg.D_x = j["deg_x"].get<std::uint32_t>();
    if (j.contains("numerator_bound")) cfg.numerator_bound = j["numerator_bound"].get<std::int64_t>();
    cfg.suites = j.value("suites", std::vector<std::string>{});
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return run_report(cfg, jobs).json.dump();
}

std::vector<std::uint32_t> smith_exponents(const std::vector<std::vector<std::int64_t>>& rows, std::uint32_t p,
                                           std::uint32_t n) {
    const RingParams P(p, n);
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    ModMatrix A(rows.size(), cols, P);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw PreconditionError("ragged matrix");
        for (std::size_t j = 0; j < cols; ++j) A(i, j) = P.reduce(rows[i][j]);
    }
    return snf_local(A, false).exponents;
}

}  // namespace

PYBIND11_MODULE(_pcris, m) {
    m.doc() = "Exact verification suites for finite period-ring models";
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    m.def("suite_names", &suite_names);
    m.def("run_report_json", &run_report_json, py::arg("config_json"), py::arg("jobs") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("nilpotency_bound", [](std::uint32_t p, std::uint32_t n) { return nilpotency_bound(RingParams(p, n)); });
    m.def("smith_exponents", &smith_exponents, py::arg("rows"), py::arg("p"), py::arg("n"));
    m.def(
        "normalize_exponent",
        [](std::vector<std::int64_t> num, std::uint32_t p, std::uint32_t m_, std::uint32_t r, const std::string& c) {
            if (num.size() < 2) throw PreconditionError("need at least one T coordinate and pi");
            LatticeShape s;
            s.p = p;
            s.m = m_;
            s.d = static_cast<std::uint32_t>(num.size() - 2);
            s.r = r;
            s.c = parse_cmode(c);
            s.N = std::numeric_limits<std::int32_t>::max();
            return normalize_semistable(s, ExponentVec{std::move(num)}).num;
        },
        py::arg("numerators"), py::arg("p"), py::arg("m"), py::arg("r"), py::arg("c") = "pi");
}
