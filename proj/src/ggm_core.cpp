#include "sosggm/ggm_core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace sosggm {

TreeWindow build_window(int k, int R) {
    if (k < 2) throw std::invalid_argument("branching number k must be >= 2");
    if (R < 1) throw std::invalid_argument("radius must be >= 1");
    // vertex count 1 + (k+1)(k^R - 1)/(k - 1); refuse absurd windows early
    double approx = 1.0 + (k + 1) * (std::pow(double(k), R) - 1.0) / (k - 1);
    if (approx > 1e6) throw std::length_error("window too large");
    TreeWindow w;
    w.k = k;
    w.R = R;
    w.parent.push_back(-1);
    w.depth.push_back(0);
    w.children.emplace_back();
    w.path_edges.emplace_back();
    for (int v = 0; v < static_cast<int>(w.parent.size()); ++v) {
        if (w.depth[v] >= R) continue;
        int fanout = (v == 0) ? k + 1 : k;
        for (int c = 0; c < fanout; ++c) {
            int nv = static_cast<int>(w.parent.size());
            w.parent.push_back(v);
            w.depth.push_back(w.depth[v] + 1);
            w.children.emplace_back();
            w.children[v].push_back(nv);
            w.edges.emplace_back(v, nv);
            std::vector<int> pe = w.path_edges[v];
            pe.push_back(nv - 1);
            w.path_edges.push_back(std::move(pe));
        }
    }
    for (int v = 0; v < w.n_vertices(); ++v) {
        (w.depth[v] == R ? w.boundary : w.interior).push_back(v);
    }
    return w;
}

double TransferOperator::operator()(long long dz) const {
    return std::pow(theta, static_cast<double>(dz < 0 ? -dz : dz));
}

PeriodicBoundaryLaw boundary_law_from_pair(const BoundaryLawPair &pair) {
    if (!(pair.a > 0.0) || !(pair.b > 0.0))
        throw std::invalid_argument("boundary law entries must be positive");
    PeriodicBoundaryLaw law;
    law.k = pair.params.k;
    law.tau = pair.params.tau;
    law.theta = pair.params.theta;
    law.u = {1.0, pair.b, 1.0, pair.a};
    law.h = {1.0, 1.0, 1.0, 1.0};
    for (int i = 0; i < 4; ++i) law.z[i] = law.h[i] * std::pow(law.u[i], law.k);
    law.has_field = false;
    return law;
}

PeriodicBoundaryLaw boundary_law_from_field(const FieldSolution &sol) {
    if (!(sol.a > 0.0) || !(sol.b > 0.0))
        throw std::invalid_argument("boundary law entries must be positive");
    PeriodicBoundaryLaw law;
    law.k = sol.params.base.k;
    law.tau = sol.params.base.tau;
    law.theta = sol.params.base.theta;
    law.u = {1.0, sol.b, 1.0, sol.a};
    law.h = {1.0, sol.params.h2, 1.0, sol.params.h1};
    for (int i = 0; i < 4; ++i) law.z[i] = law.h[i] * std::pow(law.u[i], law.k);
    law.has_field = true;
    return law;
}

PeriodicBoundaryLaw shift_law(const PeriodicBoundaryLaw &law, int r) {
    PeriodicBoundaryLaw out = law;
    for (int i = 0; i < 4; ++i) {
        out.u[i] = law.u[T4(i + r)];
        out.z[i] = law.z[T4(i + r)];
        out.h[i] = law.h[T4(i + r)];
    }
    return out;
}

std::array<double, 4> kz_values(const PeriodicBoundaryLaw &law) {
    const double t = law.theta;
    const double block = 1.0 - std::pow(t, 4);
    std::array<double, 4> kz{};
    for (int i = 0; i < 4; ++i) {
        double s = 0.0;
        double tp = 1.0;
        for (int r = 1; r <= 4; ++r) {
            tp *= t;
            s += tp * (law.z[T4(i + r)] + law.z[T4(i - r)]);
        }
        kz[i] = law.z[i] + s / block;
    }
    return kz;
}

SeriesSums series_sums(const PeriodicBoundaryLaw &law) {
    const double t = law.theta;
    if (!(t < 1.0)) throw std::invalid_argument("theta must be < 1");
    const double block = 1.0 - std::pow(t, 4);
    SeriesSums out;
    // common left block: sum_{m>=1} theta^m z(-m)
    double left = 0.0, tp = 1.0;
    for (int r = 1; r <= 4; ++r) {
        tp *= t;
        left += tp * law.z[T4(-r)];
    }
    left /= block;
    for (int i = 0; i < 4; ++i) {
        out.l[i] = std::pow(t, i) * left;
        double head = 0.0;
        for (int j = 1; j <= i; ++j) head += std::pow(t, i - j) * law.z[T4(j)];
        double tail = 0.0;
        tp = 1.0;
        for (int r = 1; r <= 4; ++r) {
            tp *= t;
            tail += tp * law.z[T4(i + r)];
        }
        out.r[i] = head + tail / block;
    }
    return out;
}

double check_consistency(const PeriodicBoundaryLaw &law, double tol) {
    const double a = law.u[3], b = law.u[1];
    const double d = a + b - law.tau;
    if (std::abs(d) < std::max(tol, 1e-9) * std::max(1.0, law.tau))
        throw std::domain_error("singular law: u(-1) + u(1) - tau vanishes");
    double res1 = 0.0;
    for (int i = 0; i < 4; ++i) {
        double lhs = law.z[i];  // h(i) u_i^k
        double rhs = (law.u[T4(i - 1)] + law.u[T4(i + 1)] - law.tau * law.u[i]) / d;
        res1 = std::max(res1, std::abs(lhs - rhs));
    }
    auto kz = kz_values(law);
    double res2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        double rhs = law.h[i] * std::pow(kz[i] / kz[0], law.k);
        res2 = std::max(res2, std::abs(law.z[i] - rhs));
    }
    return std::max(res1, res2);
}

ProbeResult normalisability_probe(const PeriodicBoundaryLaw &law, int depth) {
    if (depth < 4) throw std::invalid_argument("depth must be >= 4");
    auto kz = kz_values(law);
    std::array<double, 4> term{};
    double cf = 0.0;
    for (int i = 0; i < 4; ++i) {
        term[i] = std::pow(kz[i], law.k + 1);
        cf += term[i];
    }
    ProbeResult pr;
    pr.depth = depth;
    pr.closed_form_slope = cf / 4.0;
    double s_half = 0.0, s_full = 0.0, max_term = 0.0;
    int half = depth / 2;
    for (int i = -depth; i <= depth; ++i) {
        double v = term[T4(i)];
        s_full += v;
        if (std::abs(i) <= half) s_half += v;
        max_term = std::max(max_term, v);
    }
    pr.last_partial = s_full;
    int extra_terms = (2 * depth + 1) - (2 * half + 1);
    pr.slope = (s_full - s_half) / extra_terms;
    pr.divergent = pr.slope > 1e-12 * std::max(1.0, max_term);
    return pr;
}

ProbeResult normalisability_probe_fn(const std::function<double(long long)> &z, double theta,
                                     int k, int depth) {
    if (!(theta > 0.0) || !(theta < 1.0)) throw std::invalid_argument("theta must be in (0,1)");
    if (depth < 4) throw std::invalid_argument("depth must be >= 4");
    long long W = static_cast<long long>(std::ceil(709.78 / -std::log(theta)));
    W = std::min<long long>(W, 20000);
    auto kz_at = [&](long long i) {
        double s = 0.0;
        for (long long j = i - W; j <= i + W; ++j) {
            double zj = z(j);
            if (zj == 0.0) continue;
            s += std::pow(theta, static_cast<double>(j > i ? j - i : i - j)) * zj;
        }
        return s;
    };
    ProbeResult pr;
    pr.depth = depth;
    double s_half = 0.0, s_full = 0.0, max_term = 0.0;
    int half = depth / 2;
    for (long long i = -depth; i <= depth; ++i) {
        double v = std::pow(kz_at(i), k + 1);
        s_full += v;
        if (std::llabs(i) <= half) s_half += v;
        max_term = std::max(max_term, v);
    }
    pr.last_partial = s_full;
    int extra_terms = 2 * depth - 2 * half;
    pr.slope = (s_full - s_half) / extra_terms;
    pr.closed_form_slope = pr.slope;
    pr.divergent = pr.slope > 1e-12 * std::max(1.0, max_term);
    return pr;
}

TransitionKernel transition_kernel(const PeriodicBoundaryLaw &law, int M) {
    if (M < 1) throw std::invalid_argument("window M must be >= 1");
    auto kz = kz_values(law);
    TransitionKernel tk;
    tk.M = M;
    tk.theta = law.theta;
    tk.rows.assign(2 * M + 1, std::vector<double>(2 * M + 1, 0.0));
    tk.row_tail_mass.assign(2 * M + 1, 0.0);
    for (int i = -M; i <= M; ++i) {
        double rowsum = 0.0;
        for (int j = -M; j <= M; ++j) {
            double p = law.z[T4(j)] * std::pow(law.theta, std::abs(j - i)) / kz[T4(i)];
            tk.rows[i + M][j + M] = p;
            rowsum += p;
        }
        tk.row_tail_mass[i + M] = 1.0 - rowsum;
    }
    return tk;
}

double default_budget() {
    if (const char *env = std::getenv("SOS_GGM_BUDGET")) {
        double v = std::atof(env);
        if (v > 0) return v;
    }
    return 5e7;
}

namespace {

void check_budget(const TreeWindow &w, int M, double budget) {
    double log_configs = w.n_edges() * std::log(2.0 * M + 1.0);
    if (log_configs > std::log(budget))
        throw std::length_error("configuration space (2M+1)^edges exceeds the enumeration budget");
}

GradientMeasureTable enumerate_table(const PeriodicBoundaryLaw &law, const TreeWindow &w, int s,
                                     int M, double budget, bool mixed) {
    if (M < 1) throw std::invalid_argument("window M must be >= 1");
    if (!mixed && (s < 0 || s > 3)) throw std::invalid_argument("pin must be in 0..3");
    if (budget <= 0) budget = default_budget();
    check_budget(w, M, budget);

    const int ne = w.n_edges();
    const int nv = w.n_vertices();
    GradientMeasureTable tab;
    tab.k = w.k;
    tab.R = w.R;
    tab.M = M;
    tab.pin = mixed ? -1 : s;

    std::vector<int> zeta(ne, -M);
    std::vector<long long> psum(nv, 0);
    std::vector<double> theta_pow(2 * M + 1);
    for (int v = -M; v <= M; ++v) theta_pow[v + M] = std::pow(law.theta, std::abs(v));

    double Z = 0.0;
    bool done = false;
    while (!done) {
        // path sums in BFS order (vertex v has edge v-1 to its parent)
        for (int v = 1; v < nv; ++v) psum[v] = psum[w.parent[v]] + zeta[v - 1];
        double qprod = 1.0;
        for (int e = 0; e < ne; ++e) qprod *= theta_pow[zeta[e] + M];
        double weight = 0.0;
        for (int pin = mixed ? 0 : s; pin <= (mixed ? 3 : s); ++pin) {
            double wgt = qprod;
            for (int y : w.boundary) wgt *= law.z[T4(pin + psum[y])];
            if (law.has_field)
                for (int x : w.interior) wgt *= law.h[T4(pin + psum[x])];
            weight += wgt;
        }
        Z += weight;
        if (weight >= 1e-300) tab.entries.emplace_back(zeta, weight);
        // odometer
        int e = ne - 1;
        while (e >= 0 && zeta[e] == M) zeta[e--] = -M;
        if (e < 0) done = true;
        else ++zeta[e];
    }
    tab.Z = Z;
    for (auto &en : tab.entries) en.second /= Z;
    return tab;
}

}  // namespace

GradientMeasureTable pinned_measure(const PeriodicBoundaryLaw &law, const TreeWindow &w, int s,
                                    int M, double budget) {
    return enumerate_table(law, w, s, M, budget, false);
}

GradientMeasureTable mixed_measure(const PeriodicBoundaryLaw &law, const TreeWindow &w, int M,
                                   double budget) {
    return enumerate_table(law, w, 0, M, budget, true);
}

std::vector<double> r1_edge_table(const PeriodicBoundaryLaw &law, int s, int M) {
    std::vector<double> p(2 * M + 1);
    double total = 0.0;
    for (int dz = -M; dz <= M; ++dz) {
        p[dz + M] = std::pow(law.theta, std::abs(dz)) * law.z[T4(s + dz)];
        total += p[dz + M];
    }
    for (auto &v : p) v /= total;
    return p;
}

std::vector<double> r2_edge_table(const PeriodicBoundaryLaw &law, int s, int M) {
    // truncated one-branch sum K_M(c) = sum_{|eta|<=M} theta^{|eta|} z(T4(c+eta))
    std::array<double, 4> km{};
    for (int c = 0; c < 4; ++c) {
        double sum = 0.0;
        for (int eta = -M; eta <= M; ++eta)
            sum += std::pow(law.theta, std::abs(eta)) * law.z[T4(c + eta)];
        km[c] = sum;
    }
    std::vector<double> q(2 * M + 1);
    double total = 0.0;
    for (int dz = -M; dz <= M; ++dz) {
        int c = T4(s + dz);
        q[dz + M] = std::pow(law.theta, std::abs(dz)) * law.h[c] * std::pow(km[c], law.k);
        total += q[dz + M];
    }
    for (auto &v : q) v /= total;
    return q;
}

double marginal_consistency_error(const PeriodicBoundaryLaw &law, int s, int M) {
    std::vector<double> p = r1_edge_table(law, s, M);
    std::vector<double> q = r2_edge_table(law, s, M);
    const int n = 2 * M + 1;
    const int edges = law.k + 1;  // root edges of the R=1 window
    std::vector<int> idx(edges, 0);
    double worst = 0.0;
    bool done = false;
    while (!done) {
        double pp = 1.0, qq = 1.0;
        for (int e = 0; e < edges; ++e) {
            pp *= p[idx[e]];
            qq *= q[idx[e]];
        }
        worst = std::max(worst, std::abs(pp - qq));
        int e = edges - 1;
        while (e >= 0 && idx[e] == n - 1) idx[e--] = 0;
        if (e < 0) done = true;
        else ++idx[e];
    }
    return worst;
}

IdentVerdict identifiability_check(const BoundaryLawPair &p1, const BoundaryLawPair &p2,
                                   double tol) {
    return possibly_equal_pairs(p1, p2, tol) ? IdentVerdict::possibly_equal
                                             : IdentVerdict::distinct;
}

}  // namespace sosggm
