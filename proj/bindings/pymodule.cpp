#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sosggm/boundary_law.hpp"
#include "sosggm/external_field.hpp"
#include "sosggm/ggm_core.hpp"
#include "sosggm/phase_diagram.hpp"
#include "sosggm/verify.hpp"

namespace py = pybind11;
using namespace sosggm;

namespace {

py::dict pair_dict(const BoundaryLawPair &s) {
    py::dict d;
    d["a"] = s.a;
    d["b"] = s.b;
    d["kind"] = s.kind();
    d["residual_a"] = s.residual_a;
    d["residual_b"] = s.residual_b;
    return d;
}

py::dict field_dict(const FieldSolution &s) {
    py::dict d;
    d["index"] = s.index;
    d["a"] = s.a;
    d["b"] = s.b;
    d["branch"] = branch_name(s.branch);
    d["residual_a"] = s.residual_a;
    d["residual_b"] = s.residual_b;
    return d;
}

PeriodicBoundaryLaw law_at(int k, double tau, int index, double tol) {
    auto sols = solve_generic(ModelParams(k, tau), tol);
    if (index < 0 || index >= static_cast<int>(sols.size()))
        throw std::out_of_range("index out of range for the solution list");
    return boundary_law_from_pair(sols[index]);
}

py::dict table_dict(const GradientMeasureTable &t) {
    py::dict d;
    py::dict w;
    w["k"] = t.k;
    w["R"] = t.R;
    d["window"] = w;
    d["M"] = t.M;
    d["pin"] = t.pin;
    py::list entries;
    for (const auto &e : t.entries) {
        py::list row;
        row.append(e.first);
        row.append(e.second);
        entries.append(row);
    }
    d["entries"] = entries;
    d["Z"] = t.Z;
    return d;
}

}  // namespace

PYBIND11_MODULE(_sosggm, m) {
    m.doc() = "4-periodic boundary laws and gradient Gibbs measures of the SOS model on Cayley trees";

    m.def("psi", &psi, py::arg("k"), py::arg("a"),
          "height-2 threshold curve; its minimum over a > 0 is the critical tau");

    m.def(
        "critical_values",
        [](int k) {
            CriticalValues cv = critical_values(k);
            py::dict d;
            d["k"] = cv.k;
            d["tau_c"] = cv.tau_c;
            d["tau_1"] = cv.tau_1;
            d["tau_2"] = cv.tau_2;
            if (k == 3) {
                d["tau_cr_1"] = cv.tau_cr_1;
                d["tau_cr_2"] = cv.tau_cr_2;
            }
            return d;
        },
        py::arg("k"));

    m.def(
        "solve",
        [](int k, double tau, double tol) {
            py::list out;
            for (const auto &s : solve_generic(ModelParams(k, tau), tol)) out.append(pair_dict(s));
            return out;
        },
        py::arg("k"), py::arg("tau"), py::arg("tol") = 1e-12,
        "all positive solutions of the boundary-law system, equal family first");

    m.def(
        "solve_k3",
        [](double tau, double tol) {
            py::list out;
            for (const auto &s : solve_k3(tau, tol)) out.append(pair_dict(s));
            return out;
        },
        py::arg("tau"), py::arg("tol") = 1e-12, "closed quartic route, unequal pairs only");

    m.def(
        "count_solutions",
        [](int k, double tau) {
            SolutionCount sc = count_solutions_detail(ModelParams(k, tau));
            py::dict d;
            d["n_equal"] = sc.n_equal;
            d["n_unequal"] = sc.n_unequal;
            d["n_total"] = sc.n_total;
            d["n_ggm_upper"] = sc.n_ggm_upper;
            d["count"] = sc.count;
            return d;
        },
        py::arg("k"), py::arg("tau"));

    m.def(
        "solve_field",
        [](int k, double tau, double h1, double h2, double tol) {
            py::list out;
            FieldParams fp(ModelParams(k, tau), h1, h2);
            auto sols = (k == 2 && h1 == h2) ? solve_k2_uniform(tau, h1, tol)
                                             : solve_field_generic(fp, tol);
            for (const auto &s : sols) out.append(field_dict(s));
            return out;
        },
        py::arg("k"), py::arg("tau"), py::arg("h1"), py::arg("h2"), py::arg("tol") = 1e-12);

    m.def(
        "classify_region",
        [](double tau, double h) { return classify_region(tau, h).value; }, py::arg("tau"),
        py::arg("h"));

    m.def(
        "scan",
        [](int k, double tau_min, double tau_max, int steps) {
            ScanResult sr = scan_tau(k, tau_min, tau_max, steps);
            py::list points;
            for (const auto &p : sr.points) {
                py::dict d;
                d["tau"] = p.tau;
                d["n_equal"] = p.n_equal;
                d["n_unequal"] = p.n_unequal;
                d["n_total"] = p.n_total;
                d["n_ggm_upper"] = p.n_ggm_upper;
                points.append(d);
            }
            py::list transitions;
            for (const auto &t : sr.transitions) {
                py::dict d;
                d["tau_star"] = t.tau_star;
                d["count_left"] = t.count_left;
                d["count_right"] = t.count_right;
                transitions.append(d);
            }
            py::dict out;
            out["points"] = points;
            out["transitions"] = transitions;
            out["exceptional"] = sr.exceptional;
            return out;
        },
        py::arg("k"), py::arg("tau_min"), py::arg("tau_max"), py::arg("steps"));

    m.def(
        "pinned_table",
        [](int k, double tau, int index, int R, int M, int pin, double budget) {
            PeriodicBoundaryLaw law = law_at(k, tau, index, 1e-12);
            return table_dict(pinned_measure(law, build_window(k, R), pin, M, budget));
        },
        py::arg("k"), py::arg("tau"), py::arg("index") = 0, py::arg("R") = 1, py::arg("M") = 20,
        py::arg("pin") = 0, py::arg("budget") = -1.0);

    m.def(
        "mixed_table",
        [](int k, double tau, int index, int R, int M, double budget) {
            PeriodicBoundaryLaw law = law_at(k, tau, index, 1e-12);
            return table_dict(mixed_measure(law, build_window(k, R), M, budget));
        },
        py::arg("k"), py::arg("tau"), py::arg("index") = 0, py::arg("R") = 1, py::arg("M") = 20,
        py::arg("budget") = -1.0);

    m.def(
        "check_consistency",
        [](int k, double tau, int index) { return check_consistency(law_at(k, tau, index, 1e-12)); },
        py::arg("k"), py::arg("tau"), py::arg("index") = 0);

    m.def(
        "marginal_error",
        [](int k, double tau, int index, int pin, int M) {
            return marginal_consistency_error(law_at(k, tau, index, 1e-12), pin, M);
        },
        py::arg("k"), py::arg("tau"), py::arg("index") = 0, py::arg("pin") = 0, py::arg("M") = 20);

    m.def(
        "normalisability",
        [](int k, double tau, int index, int depth) {
            ProbeResult pr = normalisability_probe(law_at(k, tau, index, 1e-12), depth);
            py::dict d;
            d["divergent"] = pr.divergent;
            d["slope"] = pr.slope;
            d["closed_form_slope"] = pr.closed_form_slope;
            d["last_partial"] = pr.last_partial;
            d["verdict"] = pr.verdict();
            return d;
        },
        py::arg("k"), py::arg("tau"), py::arg("index") = 0, py::arg("depth") = 10000);

    m.def(
        "verify",
        [](const std::string &only, unsigned seed) {
            std::ostringstream os;
            bool ok = run_verify(VerifyOptions{only, seed}, os);
            return py::make_tuple(ok, os.str());
        },
        py::arg("only") = std::string(), py::arg("seed") = 1u,
        "runs the self-check suite; returns (ok, report)");
}
