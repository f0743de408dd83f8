// Command-line front end: solve / scan / ggm / verify.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sosggm/boundary_law.hpp"
#include "sosggm/external_field.hpp"
#include "sosggm/ggm_core.hpp"
#include "sosggm/phase_diagram.hpp"
#include "sosggm/verify.hpp"

namespace {

using namespace sosggm;

// 17 significant digits everywhere so values round-trip
std::string fd(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Out {
    std::string path;
    std::ostringstream buf;
    int flush() {
        if (path.empty()) {
            std::cout << buf.str();
            return 0;
        }
        std::ofstream f(path);
        if (!f) {
            std::cerr << "error: cannot open output file " << path << "\n";
            return 1;
        }
        f << buf.str();
        return 0;
    }
};

struct SolveCfg {
    int k = 2;
    std::string tau;
    std::string h1, h2;
    double tol = 1e-12;
    std::string format = "json";
    std::string out;
};

int cmd_solve(const SolveCfg &cfg) {
    rat tq = rat_from_decimal(cfg.tau);
    ModelParams params(cfg.k, tq);
    Out out{cfg.out, {}, };
    bool field = !cfg.h1.empty() || !cfg.h2.empty();
    if (!field) {
        auto sols = solve_generic(params, cfg.tol);
        SolutionCount sc = count_solutions_detail(params, cfg.tol);
        if (cfg.format == "csv") {
            out.buf << "index,a,b,kind,residual_a,residual_b\n";
            for (std::size_t i = 0; i < sols.size(); ++i)
                out.buf << i << ',' << fd(sols[i].a) << ',' << fd(sols[i].b) << ','
                        << sols[i].kind() << ',' << fd(sols[i].residual_a) << ','
                        << fd(sols[i].residual_b) << '\n';
        } else {
            out.buf << "{\"k\":" << params.k << ",\"tau\":" << fd(params.tau)
                    << ",\"field\":false,\"solutions\":[";
            for (std::size_t i = 0; i < sols.size(); ++i) {
                if (i) out.buf << ',';
                out.buf << "{\"index\":" << i << ",\"a\":" << fd(sols[i].a)
                        << ",\"b\":" << fd(sols[i].b) << ",\"kind\":\"" << sols[i].kind()
                        << "\",\"residual_a\":" << fd(sols[i].residual_a)
                        << ",\"residual_b\":" << fd(sols[i].residual_b) << "}";
            }
            out.buf << "],\"counts\":{\"n_equal\":" << sc.n_equal
                    << ",\"n_unequal\":" << sc.n_unequal << ",\"n_total\":" << sc.n_total
                    << ",\"n_ggm_upper\":" << sc.n_ggm_upper << ",\"count\":" << sc.count
                    << "}}\n";
        }
        int rc = out.flush();
        return rc != 0 ? rc : (sols.empty() ? 2 : 0);
    }
    rat h1q = cfg.h1.empty() ? rat(1) : rat_from_decimal(cfg.h1);
    rat h2q = cfg.h2.empty() ? rat(1) : rat_from_decimal(cfg.h2);
    FieldParams fp(params, h1q, h2q);
    std::vector<FieldSolution> sols;
    std::string region;
    if (params.k == 2 && fp.h1 == fp.h2) {
        sols = solve_k2_uniform(params.tau, fp.h1, cfg.tol);
        region = classify_region(tq, h1q).value;
    } else {
        sols = solve_field_generic(fp, cfg.tol);
    }
    if (cfg.format == "csv") {
        out.buf << "index,a,b,branch,residual_a,residual_b\n";
        for (const auto &s : sols)
            out.buf << s.index << ',' << fd(s.a) << ',' << fd(s.b) << ',' << branch_name(s.branch)
                    << ',' << fd(s.residual_a) << ',' << fd(s.residual_b) << '\n';
    } else {
        out.buf << "{\"k\":" << params.k << ",\"tau\":" << fd(params.tau)
                << ",\"field\":true,\"h1\":" << fd(fp.h1) << ",\"h2\":" << fd(fp.h2);
        if (!region.empty()) out.buf << ",\"region\":\"" << region << "\"";
        out.buf << ",\"solutions\":[";
        for (std::size_t i = 0; i < sols.size(); ++i) {
            if (i) out.buf << ',';
            out.buf << "{\"index\":" << sols[i].index << ",\"a\":" << fd(sols[i].a)
                    << ",\"b\":" << fd(sols[i].b) << ",\"branch\":\"" << branch_name(sols[i].branch)
                    << "\",\"residual_a\":" << fd(sols[i].residual_a)
                    << ",\"residual_b\":" << fd(sols[i].residual_b) << "}";
        }
        out.buf << "],\"counts\":{\"n_candidates\":" << sols.size() << "}}\n";
    }
    int rc = out.flush();
    return rc != 0 ? rc : (sols.empty() ? 2 : 0);
}

struct ScanCfg {
    int k = 2;
    double tau_min = 2.1, tau_max = 8.0;
    int steps = 100;
    double h_min = 0.0, h_max = 0.0;
    int h_steps = 10;
    std::string format = "json";
    std::string out;
};

void scan_json(std::ostream &os, const ScanResult &sr) {
    os << "{\"points\":[";
    for (std::size_t i = 0; i < sr.points.size(); ++i) {
        const PhasePoint &p = sr.points[i];
        if (i) os << ',';
        os << "{\"tau\":" << fd(p.tau);
        if (p.has_h) os << ",\"h\":" << fd(p.h);
        os << ",\"k\":" << p.k << ",\"n_equal\":" << p.n_equal << ",\"n_unequal\":" << p.n_unequal
           << ",\"n_total\":" << p.n_total << ",\"n_ggm_upper\":" << p.n_ggm_upper
           << ",\"region\":\"" << (p.region.empty() ? "-" : p.region) << "\"}";
    }
    os << "],\"transitions\":[";
    for (std::size_t i = 0; i < sr.transitions.size(); ++i) {
        const Transition &t = sr.transitions[i];
        if (i) os << ',';
        os << "{\"tau_star\":" << fd(t.tau_star) << ",\"count_left\":" << t.count_left
           << ",\"count_right\":" << t.count_right << "}";
    }
    os << "],\"exceptional\":[";
    for (std::size_t i = 0; i < sr.exceptional.size(); ++i) {
        if (i) os << ',';
        os << fd(sr.exceptional[i]);
    }
    os << "]";
    if (!sr.points.empty() && sr.points[0].has_h)
        os << ",\"region_curves\":[{\"name\":\"B-lower\",\"h\":\"4/tau\"},"
              "{\"name\":\"A-boundary\",\"h\":\"tau^3/(8(tau^2-8))\"}]";
    os << ",\"max_candidates\":" << sr.max_candidates << "}\n";
}

int cmd_scan(const ScanCfg &cfg) {
    ScanResult sr;
    if (cfg.h_min > 0.0 || cfg.h_max > 0.0) {
        sr = scan_tau_h(cfg.k, cfg.tau_min, cfg.tau_max, cfg.steps, cfg.h_min, cfg.h_max,
                        cfg.h_steps);
    } else {
        sr = scan_tau(cfg.k, cfg.tau_min, cfg.tau_max, cfg.steps);
    }
    Out out{cfg.out, {}, };
    if (cfg.format == "csv") write_csv(out.buf, sr);
    else scan_json(out.buf, sr);
    int rc = out.flush();
    return rc != 0 ? rc : (sr.points.empty() ? 2 : 0);
}

struct GgmCfg {
    int k = 2;
    std::string tau;
    std::string h1, h2;
    double tol = 1e-12;
    int index = 0;
    int radius = 1;
    int window = 20;
    int pin = 0;
    bool mixed = false;
    bool check = false;
    double budget = 0.0;
    std::string format = "json";
    std::string out;
};

void table_json(std::ostream &os, const GradientMeasureTable &t) {
    os << "{\"window\":{\"k\":" << t.k << ",\"R\":" << t.R << "},\"M\":" << t.M
       << ",\"pin\":" << t.pin << ",\"entries\":[";
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
        if (i) os << ',';
        os << "[[";
        for (std::size_t j = 0; j < t.entries[i].first.size(); ++j) {
            if (j) os << ',';
            os << t.entries[i].first[j];
        }
        os << "]," << fd(t.entries[i].second) << "]";
    }
    os << "],\"Z\":" << fd(t.Z) << "}\n";
}

int cmd_ggm(const GgmCfg &cfg) {
    rat tq = rat_from_decimal(cfg.tau);
    ModelParams params(cfg.k, tq);
    bool field = !cfg.h1.empty() || !cfg.h2.empty();
    PeriodicBoundaryLaw law;
    if (!field) {
        auto sols = solve_generic(params, cfg.tol);
        if (cfg.index < 0 || cfg.index >= static_cast<int>(sols.size()))
            throw std::invalid_argument("--index out of range: " + std::to_string(sols.size()) +
                                        " solutions at this tau");
        law = boundary_law_from_pair(sols[cfg.index]);
    } else {
        rat h1q = cfg.h1.empty() ? rat(1) : rat_from_decimal(cfg.h1);
        rat h2q = cfg.h2.empty() ? rat(1) : rat_from_decimal(cfg.h2);
        FieldParams fp(params, h1q, h2q);
        auto sols = (params.k == 2 && fp.h1 == fp.h2)
                        ? solve_k2_uniform(params.tau, fp.h1, cfg.tol)
                        : solve_field_generic(fp, cfg.tol);
        if (cfg.index < 0 || cfg.index >= static_cast<int>(sols.size()))
            throw std::invalid_argument("--index out of range: " + std::to_string(sols.size()) +
                                        " candidates at this point");
        law = boundary_law_from_field(sols[cfg.index]);
    }
    Out out{cfg.out, {}, };
    if (cfg.check) {
        double c = check_consistency(law);
        double m = marginal_consistency_error(law, cfg.pin, cfg.window);
        out.buf << "{\"window\":{\"k\":" << cfg.k << ",\"R\":" << cfg.radius
                << "},\"M\":" << cfg.window << ",\"pin\":" << cfg.pin
                << ",\"consistency\":" << fd(c) << ",\"marginalization\":" << fd(m) << "}\n";
        int rc = out.flush();
        if (rc != 0) return rc;
        // marginalization is window-limited, so only the law residual gates the exit
        return std::abs(c) <= 1e-6 ? 0 : 1;
    }
    TreeWindow w = build_window(cfg.k, cfg.radius);
    double budget = cfg.budget > 0.0 ? cfg.budget : default_budget();
    GradientMeasureTable table = cfg.mixed ? mixed_measure(law, w, cfg.window, budget)
                                           : pinned_measure(law, w, cfg.pin, cfg.window, budget);
    if (cfg.format == "csv") {
        for (int e = 0; e < w.n_edges(); ++e) out.buf << "zeta_" << e << ',';
        out.buf << "probability\n";
        for (const auto &en : table.entries) {
            for (int v : en.first) out.buf << v << ',';
            out.buf << fd(en.second) << '\n';
        }
    } else {
        table_json(out.buf, table);
    }
    int rc = out.flush();
    return rc != 0 ? rc : (table.entries.empty() ? 2 : 0);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"4-periodic boundary laws and gradient Gibbs measures of the SOS model on Cayley trees"};
    app.require_subcommand(1);

    SolveCfg sc;
    CLI::App *solve = app.add_subcommand("solve", "solve the boundary-law system at one point");
    solve->add_option("--k", sc.k, "branching number (>= 2)");
    solve->add_option("--tau", sc.tau, "temperature parameter tau > 2")->required();
    solve->add_option("--h1", sc.h1, "external field weight at residue 3");
    solve->add_option("--h2", sc.h2, "external field weight at residue 1");
    solve->add_option("--tol", sc.tol, "solver tolerance");
    solve->add_option("--format", sc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    solve->add_option("--out", sc.out, "write output to a file");

    ScanCfg scn;
    CLI::App *scan = app.add_subcommand("scan", "scan tau (or a tau,h grid) and count solutions");
    scan->add_option("--k", scn.k, "branching number (>= 2)");
    scan->add_option("--tau-min", scn.tau_min, "left end of the tau range");
    scan->add_option("--tau-max", scn.tau_max, "right end of the tau range");
    scan->add_option("--steps", scn.steps, "tau sample count");
    scan->add_option("--h-min", scn.h_min, "left end of the field range (enables the grid)");
    scan->add_option("--h-max", scn.h_max, "right end of the field range");
    scan->add_option("--h-steps", scn.h_steps, "field sample count");
    scan->add_option("--format", scn.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    scan->add_option("--out", scn.out, "write output to a file");

    GgmCfg gc;
    CLI::App *ggm = app.add_subcommand("ggm", "build a gradient Gibbs measure table on a window");
    ggm->add_option("--k", gc.k, "branching number (>= 2)");
    ggm->add_option("--tau", gc.tau, "temperature parameter tau > 2")->required();
    ggm->add_option("--h1", gc.h1, "external field weight at residue 3");
    ggm->add_option("--h2", gc.h2, "external field weight at residue 1");
    ggm->add_option("--tol", gc.tol, "solver tolerance");
    ggm->add_option("--index", gc.index, "which solution to use (solve output order)");
    ggm->add_option("--radius", gc.radius, "window radius R");
    ggm->add_option("--window", gc.window, "per-edge truncation M");
    ggm->add_option("--pin", gc.pin, "pinned root class s in 0..3");
    ggm->add_flag("--mixed", gc.mixed, "root-average table instead of a pinned one");
    ggm->add_flag("--check-consistency", gc.check,
                  "report consistency and marginalization residuals instead of a table");
    ggm->add_option("--budget", gc.budget, "enumeration size budget (overrides SOS_GGM_BUDGET)");
    ggm->add_option("--format", gc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    ggm->add_option("--out", gc.out, "write output to a file");

    VerifyOptions vo;
    std::string verify_out;
    CLI::App *verify = app.add_subcommand("verify", "run the self-check suite");
    verify->add_option("--only", vo.only, "run a single check group");
    verify->add_option("--seed", vo.seed, "seed for randomized checks");
    verify->add_option("--out", verify_out, "write output to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(solve)) return cmd_solve(sc);
        if (app.got_subcommand(scan)) return cmd_scan(scn);
        if (app.got_subcommand(ggm)) return cmd_ggm(gc);
        if (app.got_subcommand(verify)) {
            if (!verify_out.empty()) {
                std::ofstream f(verify_out);
                if (!f) {
                    std::cerr << "error: cannot open output file " << verify_out << "\n";
                    return 1;
                }
                return sosggm::run_verify(vo, f) ? 0 : 1;
            }
            return sosggm::run_verify(vo, std::cout) ? 0 : 1;
        }
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::length_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::out_of_range &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
