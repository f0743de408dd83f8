#include "sosggm/phase_diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "sosggm/external_field.hpp"

namespace sosggm {

namespace {

PhasePoint point_at(int k, double tau) {
    ModelParams params(k, tau);
    SolutionCount sc = count_solutions_detail(params);
    PhasePoint p;
    p.tau = tau;
    p.k = k;
    p.n_equal = sc.n_equal;
    p.n_unequal = sc.n_unequal;
    p.n_total = sc.n_total;
    p.n_ggm_upper = sc.n_ggm_upper;
    return p;
}

int headline(int k, double tau) {
    return count_solutions(ModelParams(k, tau));
}

PhasePoint field_point_at(double tau, double h) {
    FieldParams fp(ModelParams(2, tau), h, h);  // validates the point
    auto sols = solve_k2_uniform(tau, h);
    PhasePoint p;
    p.tau = tau;
    p.h = h;
    p.has_h = true;
    p.k = 2;
    for (const auto &s : sols) {
        if (s.branch == FieldBranch::equal) ++p.n_equal;
    }
    int ordered_unequal = static_cast<int>(sols.size()) - p.n_equal;
    p.n_unequal = ordered_unequal / 2;
    p.n_total = static_cast<int>(sols.size());
    p.n_ggm_upper = p.n_equal + p.n_unequal;
    p.region = classify_region(tau, h).value;
    (void)fp;
    return p;
}

}  // namespace

ScanResult scan_tau(int k, double tau_lo, double tau_hi, int steps) {
    if (!(tau_hi > tau_lo)) throw std::invalid_argument("empty tau range");
    if (tau_lo < 2.0) throw std::invalid_argument("tau range must start at >= 2");
    if (steps < 1) throw std::invalid_argument("steps must be >= 1");
    ScanResult sr;
    const double span = tau_hi - tau_lo;
    for (int i = 0; i < steps; ++i) {
        double tau = tau_lo + (i + 1) * span / steps;
        sr.points.push_back(point_at(k, tau));
    }
    for (std::size_t i = 0; i + 1 < sr.points.size(); ++i) {
        const PhasePoint &a = sr.points[i];
        const PhasePoint &b = sr.points[i + 1];
        int ca = (k == 3) ? a.n_ggm_upper : a.n_total;
        int cb = (k == 3) ? b.n_ggm_upper : b.n_total;
        if (ca != cb) sr.transitions.push_back(refine_transition(k, a.tau, b.tau));
    }
    CriticalValues cv = critical_values(k);
    for (double t : {cv.tau_1, cv.tau_2}) {
        if (t > tau_lo && t < tau_hi) sr.exceptional.push_back(t);
    }
    return sr;
}

ScanResult scan_tau_h(int k, double tau_lo, double tau_hi, int tau_steps, double h_lo,
                      double h_hi, int h_steps) {
    if (k != 2) throw std::invalid_argument("field grid is only implemented for k = 2");
    if (!(tau_hi > tau_lo) || !(h_hi > h_lo)) throw std::invalid_argument("empty grid range");
    if (tau_lo < 2.0) throw std::invalid_argument("tau range must start at >= 2");
    if (h_lo <= 0.0) throw std::invalid_argument("field range must be positive");
    if (tau_steps < 1 || h_steps < 1) throw std::invalid_argument("steps must be >= 1");
    ScanResult sr;
    for (int i = 0; i < tau_steps; ++i) {
        double tau = tau_lo + (i + 1) * (tau_hi - tau_lo) / tau_steps;
        for (int j = 0; j < h_steps; ++j) {
            double h = h_lo + (j + 1) * (h_hi - h_lo) / h_steps;
            PhasePoint p = field_point_at(tau, h);
            sr.max_candidates = std::max(sr.max_candidates, p.n_total);
            sr.points.push_back(std::move(p));
        }
    }
    return sr;
}

Transition refine_transition(int k, double tau_lo, double tau_hi, double tol) {
    if (!(tau_hi > tau_lo)) throw std::invalid_argument("empty tau interval");
    int clo = headline(k, tau_lo);
    int chi = headline(k, tau_hi);
    if (clo == chi) throw std::invalid_argument("no count change across the interval");
    double lo = tau_lo, hi = tau_hi;
    for (int it = 0; it < 80 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (headline(k, mid) == clo) lo = mid;
        else hi = mid;
    }
    Transition tr;
    tr.tau_star = 0.5 * (lo + hi);
    tr.count_left = clo;
    tr.count_right = headline(k, hi);
    return tr;
}

void write_csv(std::ostream &os, const ScanResult &sr) {
    bool with_h = !sr.points.empty() && sr.points.front().has_h;
    os << "tau" << (with_h ? ",h" : "") << ",k,n_equal,n_unequal,n_total,n_ggm_upper,region\n";
    char buf[64];
    for (const PhasePoint &p : sr.points) {
        std::snprintf(buf, sizeof buf, "%.17g", p.tau);
        os << buf;
        if (with_h) {
            std::snprintf(buf, sizeof buf, "%.17g", p.h);
            os << ',' << buf;
        }
        os << ',' << p.k << ',' << p.n_equal << ',' << p.n_unequal << ',' << p.n_total << ','
           << p.n_ggm_upper << ',' << (p.region.empty() ? "-" : p.region) << '\n';
    }
}

}  // namespace sosggm
