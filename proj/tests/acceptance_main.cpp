// Acceptance gate. Each numbered criterion prints one PASS/FAIL headline with
// its runtime, followed by indented measurement detail. Run everything, or a
// single criterion with --criterion N. Exit code 0 iff all selected pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sosggm/boundary_law.hpp"
#include "sosggm/external_field.hpp"
#include "sosggm/ggm_core.hpp"
#include "sosggm/phase_diagram.hpp"
#include "sosggm/polyroots.hpp"
#include "sosggm/verify.hpp"

using namespace sosggm;

namespace {

bool c1_psi_grid(std::ostream &os) {
    bool ok = true;
    for (int k = 2; k <= 6; ++k) {
        double best = 1e300;
        long arg = 0;
        for (long i = 1; i <= 100000; ++i) {
            double a = i / 10000.0;
            double v = psi(k, a);
            if (v < best) best = v, arg = i;
        }
        double closed = 2.0 * (k + 1) / (k - 1);
        bool good = std::fabs(best - closed) < 1e-10;
        if (!good || arg != 10000)
            os << "  k=" << k << ": grid min " << best << " at a=" << arg / 10000.0
               << ", closed form " << closed << "\n";
        ok &= good;
    }
    return ok;
}

bool c2_threshold_values(std::ostream &os) {
    bool ok = true;
    CriticalValues c2 = critical_values(2), c3 = critical_values(3), c4 = critical_values(4);
    auto need = [&](const char *what, double got, double want, double tol) {
        bool good = std::fabs(got - want) <= tol;
        if (!good) os << "  " << what << ": " << got << " vs " << want << "\n";
        ok &= good;
    };
    need("tau_1(2)", c2.tau_1, 4.0, 0.0);
    need("tau_2(2)", c2.tau_2, 2.0 + 2.0 * std::sqrt(5.0), 1e-12);
    need("tau_1(3)", c3.tau_1, 3.0, 0.0);
    need("tau_2(3)", c3.tau_2, 3.0 * std::sqrt(2.0), 1e-12);
    need("tau_2(4)", c4.tau_2, 3.497, 5e-4);
    os << "  tau_2(4) = " << std::setprecision(15) << c4.tau_2 << "\n";
    return ok;
}

bool c3_factorization(std::ostream &os) {
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> num(2001, 11999);
    bool ok = true;
    for (int k : {2, 3, 4}) {
        for (int t = 0; t < 20; ++t) {
            rat tau(num(rng), 1000);
            Poly<rat> P = build_P(k, tau), Q = build_Q(k, tau), U = build_U(k, tau);
            auto [quot, rem] = divide_exact(P, Q);
            bool good = rem.is_zero() && (P + Q * U).is_zero() && quot == U * rat(-1);
            if (!good) {
                os << "  k=" << k << " tau=" << tau << ": factorization failed\n";
                ok = false;
            }
        }
    }
    os << "  division remainder is exactly zero at all 60 samples; the quotient is -U,\n"
          "  i.e. the product identity holds with a global sign flip P = -(Q*U)\n";
    return ok;
}

bool c4_k2_counts(std::ostream &os) {
    double t2 = 2.0 + 2.0 * std::sqrt(5.0);
    const std::pair<double, int> pins[] = {{2.5, 1}, {3.0, 1}, {4.0, 1}, {4.5, 2},
                                           {5.0, 2}, {6.0, 2}, {6.2, 4}, {6.4, 4},
                                           {t2, 4},  {6.6, 5}, {7.0, 5}, {8.0, 5}};
    bool ok = true;
    for (auto &[tau, want] : pins) {
        int got = count_solutions(ModelParams(2, tau));
        if (got != want) {
            os << "  tau=" << tau << ": expected " << want << ", measured " << got << "\n";
            ok = false;
        }
    }
    const std::pair<std::pair<double, double>, double> brackets[] = {
        {{3.9, 4.1}, 4.0}, {{5.9, 6.1}, 6.0}, {{6.4, 6.6}, t2}};
    for (auto &[br, want] : brackets) {
        double got = refine_transition(2, br.first, br.second).tau_star;
        if (std::fabs(got - want) > 1e-5) {
            os << "  transition in (" << br.first << "," << br.second << "): " << got << " vs "
               << want << "\n";
            ok = false;
        }
    }
    return ok;
}

bool c5_k3_counts(std::ostream &os) {
    double r2 = 3.0 * std::sqrt(2.0);
    // the published piecewise count: 1 on (2, 3.13039], 2 on (3.13039, 4],
    // 3 on (4, 4.01009] and at 3*sqrt(2), 4 elsewhere above 4.01009
    const std::pair<double, int> pins[] = {
        {2.2, 1}, {2.5, 1},     {2.8, 1},     {2.997, 1}, {3.05, 1}, {3.1, 1}, {3.13039, 1},
        {3.2, 2}, {3.5, 2},     {3.8, 2},     {4.0, 2},   {4.005, 3}, {4.01009, 3},
        {4.1, 4}, {r2, 3},      {4.3, 4},     {4.5, 4},   {5.0, 4},  {6.0, 4}, {8.0, 4}};
    bool ok = true;
    int hits = 0;
    for (auto &[tau, want] : pins) {
        int got = count_solutions(ModelParams(3, tau));
        if (got == want) {
            ++hits;
        } else {
            os << "  tau=" << std::setprecision(7) << tau << ": published count " << want
               << ", measured " << got << "\n";
            ok = false;
        }
    }
    os << "  " << hits << "/20 pinned counts match the published table\n";

    CriticalValues cv = critical_values(3);
    bool a1 = std::fabs(cv.tau_cr_1 - 3.13039) <= 1e-4;
    bool a2 = std::fabs(cv.tau_cr_2 - 4.01009) <= 1e-4;
    os << std::setprecision(10) << "  recovered pair-count onsets: first " << cv.tau_cr_1
       << " (published 3.13039), second " << cv.tau_cr_2 << " (published 4.01009)\n";
    if (!a1 || !a2)
        os << "  the measured first onset sits at the quartic-discriminant crossing near\n"
              "  2.994283 and the second at 3*sqrt(2); the published decimals are not\n"
              "  reproducible from the defining equations\n";
    return ok && a1 && a2;
}

bool c6_dual_solver(std::ostream &os) {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> U(2.05, 12.0);
    bool ok = true;
    for (int i = 0; i < 50; ++i) {
        double tau = U(rng);
        auto closed = solve_k3(tau);
        std::vector<BoundaryLawPair> gen;
        for (auto &s : solve_generic(ModelParams(3, tau)))
            if (!s.equal) gen.push_back(s);
        if (closed.size() != gen.size()) {
            os << "  tau=" << std::setprecision(17) << tau << ": " << closed.size() << " vs "
               << gen.size() << " pairs\n";
            ok = false;
            continue;
        }
        for (size_t j = 0; j < closed.size(); ++j) {
            if (std::fabs(closed[j].a - gen[j].a) > 1e-9 ||
                std::fabs(closed[j].b - gen[j].b) > 1e-9) {
                os << "  tau=" << std::setprecision(17) << tau << ": coordinate gap "
                   << std::fabs(closed[j].a - gen[j].a) << "\n";
                ok = false;
            }
        }
    }
    return ok;
}

bool c7_six_roots(std::ostream &os) {
    RootSet rs = isolate_positive_roots(build_U(3, rat(6)));
    os << "  " << rs.roots.size() << " positive roots:";
    for (auto &r : rs.roots) os << " " << std::setprecision(12) << r.value;
    os << "\n";
    return rs.roots.size() == 6;
}

bool c8_field(std::ostream &os) {
    const std::pair<double, double> pts[] = {{3.0, 5.0}, {3.5, 2.0}, {4.0, 1.0}, {5.0, 0.9},
                                             {5.0, 2.0}, {6.0, 0.8}, {7.0, 1.0}, {5.0, 0.5},
                                             {2.5, 3.0}, {9.0, 0.3}};
    bool ok = true;
    std::string regions;
    for (auto &[tau, h] : pts) {
        RegionTag rt = classify_region(tau, h);
        if (regions.find(rt.value) == std::string::npos) regions += rt.value + " ";
        for (auto &s : solve_k2_uniform(tau, h)) {
            auto [ra, rb] = residuals_abd(s.params, s.a, s.b);
            if (std::fabs(ra) > 1e-10 || std::fabs(rb) > 1e-10) {
                os << "  (" << tau << "," << h << "): residual " << std::max(ra, rb) << "\n";
                ok = false;
            }
        }
    }
    os << "  regions covered: " << regions << "\n";

    for (double tau : {5.0, 6.5, 7.0}) {
        auto f = solve_k2_uniform(tau, 1.0);
        auto z = solve_generic(ModelParams(2, tau));
        size_t found = 0, pairs = 0;
        for (auto &s : z) {
            if (!s.equal) ++pairs;
            for (auto &c : f)
                if (std::fabs(c.a - s.a) < 1e-9 && std::fabs(c.b - s.b) < 1e-9) {
                    ++found;
                    break;
                }
        }
        if (found != z.size() || f.size() != z.size() + pairs) {
            os << "  h=1 tau=" << tau << ": zero-field set not reproduced\n";
            ok = false;
        }
    }

    ScanResult g = scan_tau_h(2, 2.1, 10.0, 200, 0.05, 5.0, 200);
    os << "  max candidate count over the 200x200 grid: " << g.max_candidates << "\n";
    ok &= g.max_candidates <= 7;
    return ok;
}

bool c9_marginalization(std::ostream &os) {
    bool ok = true;
    auto run = [&](const char *name, const PeriodicBoundaryLaw &law, int M) {
        double err = marginal_consistency_error(law, 0, M);
        bool good = err < 1e-8;
        os << "  " << name << ": sup entrywise gap " << std::setprecision(6) << err
           << (good ? "" : "  EXCEEDS 1e-8") << "\n";
        ok &= good;
        return err;
    };
    auto s5 = solve_generic(ModelParams(2, 5.0));
    run("k=2 tau=5       M=20", boundary_law_from_pair(s5.back()), 20);
    auto s7 = solve_generic(ModelParams(2, 7.0));
    run("k=2 tau=7       M=20", boundary_law_from_pair(s7.back()), 20);
    auto p5 = solve_k3(5.0);
    run("k=3 tau=5       M=12", boundary_law_from_pair(p5[1]), 12);
    auto p35 = solve_k3(3.5);
    PeriodicBoundaryLaw law35 = boundary_law_from_pair(p35[0]);
    double e35 = run("k=3 tau=3.5     M=12", law35, 12);
    if (e35 >= 1e-8)
        os << "  k=3 tau=3.5 at M=16: " << marginal_consistency_error(law35, 0, 16)
           << "; the fixed M=12 per-edge truncation dominates the gap (theta="
           << std::setprecision(6) << law35.theta << ", theta^13 ~ "
           << std::pow(law35.theta, 13) << ")\n";
    for (auto &s : solve_k2_uniform(5.0, 0.9))
        if (std::fabs(s.a - 1.0) < 1e-9 && std::fabs(s.b - 2.0 / 3.0) < 1e-9)
            run("k=2 tau=5 h=0.9 M=20", boundary_law_from_field(s), 20);

    try {
        pinned_measure(boundary_law_from_pair(p5[1]), build_window(3, 2), 0, 12);
        os << "  size budget failed to engage on the k=3 R=2 window\n";
        ok = false;
    } catch (const std::length_error &) {
        os << "  k=3 R=2 literal enumeration rejected by the size budget as expected;\n"
              "  the branch-factorized marginal (certified against literal enumeration\n"
              "  at small M in the unit suite) carries the comparison\n";
    }
    return ok;
}

bool c10_divergence(std::ostream &os) {
    bool ok = true;
    int n = 0;
    auto probe = [&](const PeriodicBoundaryLaw &law, double tau) {
        ProbeResult pr = normalisability_probe(law, 10000);
        if (!pr.divergent || pr.slope <= 0) {
            os << "  law at tau=" << tau << " not flagged divergent\n";
            ok = false;
        }
        ++n;
    };
    for (double tau : {3.0, 5.0, 6.2, 7.0, 8.0})
        for (auto &s : solve_generic(ModelParams(2, tau)))
            probe(boundary_law_from_pair(s), tau);
    for (double tau : {3.5, 5.0})
        for (auto &s : solve_generic(ModelParams(3, tau)))
            probe(boundary_law_from_pair(s), tau);
    for (auto &s : solve_k2_uniform(5.0, 0.9)) probe(boundary_law_from_field(s), 5.0);
    os << "  " << n << " verified laws probed to depth 10000, all with positive slope\n";
    return ok;
}

bool c11_verify_suite(std::ostream &os) {
    std::ostringstream rep;
    bool ok = run_verify(VerifyOptions{}, rep);
    std::string s = rep.str();
    size_t pos = s.rfind("VERIFY");
    if (pos != std::string::npos) os << "  " << s.substr(pos);
    return ok;
}

}  // namespace

int main(int argc, char **argv) {
    int which = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) which = std::atoi(argv[++i]);
    }
    struct Criterion {
        int id;
        const char *label;
        bool (*fn)(std::ostream &);
        double limit;
    };
    const Criterion table[] = {
        {1, "grid minimum of psi matches the closed-form critical coupling", c1_psi_grid, 1.0},
        {2, "closed-form threshold values", c2_threshold_values, 1.0},
        {3, "exact factorization through the equal-family polynomial", c3_factorization, 5.0},
        {4, "k=2 zero-field counts and thresholds", c4_k2_counts, 10.0},
        {5, "k=3 published count table and onset decimals", c5_k3_counts, 30.0},
        {6, "k=3 dual-solver agreement", c6_dual_solver, 30.0},
        {7, "k=3 tau=6 pair polynomial has exactly six positive roots", c7_six_roots, 1.0},
        {8, "uniform-field residuals, h=1 match, grid candidate bound", c8_field, 60.0},
        {9, "window marginalization consistency", c9_marginalization, 300.0},
        {10, "every verified law fails the normalisability probe", c10_divergence, 5.0},
        {11, "full invariant suite", c11_verify_suite, 120.0},
    };
    bool all = true;
    bool ran = false;
    for (auto &c : table) {
        if (which && c.id != which) continue;
        ran = true;
        std::ostringstream detail;
        detail << std::setprecision(17);
        auto t0 = std::chrono::steady_clock::now();
        bool pass = false;
        try {
            pass = c.fn(detail);
        } catch (const std::exception &e) {
            detail << "  unexpected exception: " << e.what() << "\n";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool timely = secs < c.limit;
        bool good = pass && timely;
        std::printf("C%d %s (%.2fs): %s%s\n", c.id, good ? "PASS" : "FAIL", secs, c.label,
                    timely ? "" : "  [over time budget]");
        std::fputs(detail.str().c_str(), stdout);
        std::fflush(stdout);
        all &= good;
    }
    if (!ran) {
        std::fprintf(stderr, "unknown criterion %d\n", which);
        return 1;
    }
    return all ? 0 : 1;
}
