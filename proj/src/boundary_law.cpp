#include "sosggm/boundary_law.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace sosggm {

namespace {

bigint binom(int n, int r) {
    if (r < 0 || r > n) return bigint(0);
    bigint v = 1;
    for (int i = 0; i < r; ++i) {
        v *= (n - i);
        v /= (i + 1);
    }
    return v;
}

bigint ipow(long base, int e) {
    bigint v = 1;
    while (e-- > 0) v *= base;
    return v;
}

// a couple of double Newton steps against the exact polynomial
double polish_root_double(const Poly<rat> &p, const Poly<rat> &dp, double x) {
    for (int it = 0; it < 3; ++it) {
        double fx = eval_double(p, x);
        double dx = eval_double(dp, x);
        if (dx == 0.0) break;
        double step = fx / dx;
        if (!std::isfinite(step)) break;
        x -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

double max_abs_residual(int k, double tau, double a, double b) {
    auto r = pair_residuals(k, tau, a, b);
    return std::max(std::abs(r.first), std::abs(r.second));
}

}  // namespace

ModelParams::ModelParams(int k_, double tau_) {
    if (k_ < 2) throw std::invalid_argument("branching number k must be >= 2");
    if (!(tau_ > 2.0)) throw std::invalid_argument("tau must be > 2");
    k = k_;
    tau = tau_;
    theta = (tau_ - std::sqrt(tau_ * tau_ - 4.0)) / 2.0;
    beta_J = -std::log(theta);
}

ModelParams::ModelParams(int k_, const rat &tau_) : ModelParams(k_, to_double(tau_)) {
    if (tau_ <= 2) throw std::invalid_argument("tau must be > 2");
    exact = true;
    tau_q = tau_;
}

Poly<rat> build_Q(int k, const rat &tau) {
    if (k < 2) throw std::invalid_argument("branching number k must be >= 2");
    Poly<rat> q;
    q.c.assign(static_cast<size_t>(k) + 2, rat(0));
    q.c[0] = rat(-2);
    q.c[1] = tau;
    q.c[static_cast<size_t>(k)] = -tau;
    q.c[static_cast<size_t>(k) + 1] = rat(2);
    return q;
}

Poly<rat> build_reduced(int k, const rat &tau) {
    Poly<rat> amin1;
    amin1.c = {rat(-1), rat(1)};
    auto [quot, rem] = poly_divrem(build_Q(k, tau), amin1);
    if (!rem.is_zero()) throw std::logic_error("a=1 must divide the pair polynomial");
    return quot;
}

double psi(int k, double a) {
    if (k < 2) throw std::invalid_argument("branching number k must be >= 2");
    if (!(a > 0.0)) throw std::invalid_argument("psi needs a > 0");
    double num = 2.0 * (std::pow(a, k) + 1.0);
    double den = 0.0;
    double pw = a;
    for (int j = 1; j <= k - 1; ++j) {
        den += pw;
        pw *= a;
    }
    return 2.0 + num / den;
}

Poly<rat> tau2_companion_poly(int k) {
    if (k < 2) throw std::invalid_argument("branching number k must be >= 2");
    Poly<rat> p;
    p.c.assign(static_cast<size_t>(k) + 1, rat(0));
    for (int j = 0; j <= k - 2; ++j) {
        p.c[static_cast<size_t>(k - j)] += rat(binom(k + 1, j) * ipow(2 * k, j));
    }
    p.c[1] += rat(bigint(k) * (k - 1) * ipow(2 * k, k - 1), bigint(2));
    p.c[0] = rat(-bigint(k - 1) * ipow(2 * k, k));
    p.trim();
    return p;
}

CriticalValues critical_values(int k) {
    if (k < 2) throw std::invalid_argument("branching number k must be >= 2");
    CriticalValues cv;
    cv.k = k;
    cv.tau_c = 2.0 * (k + 1) / (k - 1);
    cv.tau_1 = 2.0 * k / (k - 1);

    Poly<rat> lp = tau2_companion_poly(k);
    RootSet rs = isolate_positive_roots(lp);
    if (rs.count != 1) throw std::runtime_error("companion polynomial must have one positive root");
    double lstar = rs.roots[0].value;
    cv.tau_2 = (lstar + 2.0 * k) / (k - 1);

    if (k == 3) {
        // pair count jumps 0 -> 2 at the first critical point and
        // 1 -> 2 at the second; bisect the indicator on tight brackets
        auto npairs = [](double t) { return static_cast<int>(solve_k3(t).size()); };
        double lo = 2.9, hi = 3.05;
        for (int it = 0; it < 50; ++it) {
            double mid = (lo + hi) / 2;
            if (npairs(mid) >= 1) hi = mid; else lo = mid;
        }
        cv.tau_cr_1 = (lo + hi) / 2;
        lo = 4.05, hi = 4.5;
        for (int it = 0; it < 50; ++it) {
            double mid = (lo + hi) / 2;
            if (npairs(mid) >= 2) hi = mid; else lo = mid;
        }
        cv.tau_cr_2 = (lo + hi) / 2;
    }
    return cv;
}

Poly<rat> build_U(int k, const rat &tau) {
    Poly<rat> Q = build_Q(k, tau);
    Poly<rat> sum;
    for (int j = 0; j <= k - 1; ++j) {
        Poly<rat> term = Poly<rat>::monomial(static_cast<size_t>(k + 1) * j,
                                             rat(((k - j) % 2 == 0) ? binom(k, j) : -binom(k, j)));
        term = term * Q.pow(static_cast<unsigned>(k - j - 1));
        sum += term;
    }
    Poly<rat> two_minus_ta;
    two_minus_ta.c = {rat(2), -tau};
    Poly<rat> U = Poly<rat>::monomial(static_cast<size_t>(k) * k, tau) - two_minus_ta * sum;
    U.trim();
    return U;
}

Poly<rat> build_P(int k, const rat &tau) {
    Poly<rat> inner;
    inner.c.assign(static_cast<size_t>(k) + 2, rat(0));
    inner.c[0] = rat(2);
    inner.c[1] = -tau;
    inner.c[static_cast<size_t>(k)] += tau;
    inner.c[static_cast<size_t>(k) + 1] += rat(-1);
    Poly<rat> two_minus_ta;
    two_minus_ta.c = {rat(2), -tau};
    Poly<rat> t1 = two_minus_ta * inner.pow(static_cast<unsigned>(k));

    Poly<rat> inner2;
    inner2.c.assign(static_cast<size_t>(k) + 2, rat(0));
    inner2.c[0] = rat(-2) * tau;
    inner2.c[1] = tau * tau;
    inner2.c[static_cast<size_t>(k)] += rat(2) - tau * tau;
    inner2.c[static_cast<size_t>(k) + 1] += tau;
    Poly<rat> t2 = Poly<rat>::monomial(static_cast<size_t>(k) * k, rat(1)) * inner2;

    Poly<rat> P = t1 - t2;
    P.trim();
    return P;
}

double f_map(int k, double tau, double b) {
    if (!(b > 0.0)) throw std::invalid_argument("f needs b > 0");
    return tau - b + (2.0 - tau * b) / std::pow(b, k);
}

std::optional<double> shared_root_check(const ModelParams &p, double tol) {
    const int k = p.k;
    rat t = p.tau_rat();
    rat A = rat(ipow(k - 1, k)) * rat_pow(t, static_cast<unsigned>(k + 1));
    rat B = rat(bigint(k - 1) * ipow(2, k - 1) * ipow(k, k)) * t * t;
    rat C = rat(ipow(2 * k, k + 1));
    rat ha = A - B + C;
    rat scale = abs(A) + abs(B) + abs(C);
    if (to_double(abs(ha) / scale) <= tol) return 2.0 * k / (p.tau * (k - 1));
    return std::nullopt;
}

std::pair<double, double> pair_residuals(int k, double tau, double a, double b) {
    double s = a + b - tau;
    double ra = s * std::pow(a, k) + tau * a - 2.0;
    double rb = s * std::pow(b, k) + tau * b - 2.0;
    return {ra, rb};
}

void polish_pair(int k, double tau, double &a, double &b) {
    double best_a = a, best_b = b;
    double best_r = max_abs_residual(k, tau, a, b);
    for (int it = 0; it < 4; ++it) {
        double s = a + b - tau;
        double ak = std::pow(a, k), bk = std::pow(b, k);
        double f1 = s * ak + tau * a - 2.0;
        double f2 = s * bk + tau * b - 2.0;
        double j11 = ak + s * k * ak / a + tau;
        double j12 = ak;
        double j21 = bk;
        double j22 = bk + s * k * bk / b + tau;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double da = (f1 * j22 - f2 * j12) / det;
        double db = (f2 * j11 - f1 * j21) / det;
        double na = a, nb = b;
        for (int damp = 0; damp < 5; ++damp) {
            na = a - da;
            nb = b - db;
            if (na > 0.0 && nb > 0.0 && max_abs_residual(k, tau, na, nb) <= best_r) break;
            da /= 2;
            db /= 2;
        }
        if (!(na > 0.0 && nb > 0.0)) break;
        a = na;
        b = nb;
        double r = max_abs_residual(k, tau, a, b);
        if (r < best_r) {
            best_r = r;
            best_a = a;
            best_b = b;
        }
        if (r == 0.0) break;
    }
    a = best_a;
    b = best_b;
}

std::vector<BoundaryLawPair> solve_generic(const ModelParams &p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const int k = p.k;
    const double tau = p.tau;
    rat tq = p.tau_rat();
    std::vector<BoundaryLawPair> out;

    Poly<rat> Q = build_Q(k, tq);
    Poly<rat> dQ = Q.derivative();
    RootSet qs = isolate_positive_roots(Q, tol);
    std::vector<double> qroots;
    for (const auto &r : qs.roots) {
        double a = polish_root_double(Q, dQ, r.value);
        qroots.push_back(a);
        BoundaryLawPair bp;
        bp.params = p;
        bp.a = a;
        bp.b = a;
        bp.equal = true;
        auto res = pair_residuals(k, tau, a, a);
        bp.residual_a = res.first;
        bp.residual_b = res.second;
        out.push_back(bp);
    }

    Poly<rat> U = build_U(k, tq);
    Poly<rat> dU = U.derivative();
    RootSet us = isolate_positive_roots(U, tol);
    std::vector<double> uroots;
    for (const auto &r : us.roots) uroots.push_back(polish_root_double(U, dU, r.value));

    std::vector<std::pair<double, double>> pairs;
    for (double a : uroots) {
        bool near_q = false;
        for (double q : qroots)
            if (std::abs(a - q) <= 1e-9 * std::max(1.0, std::abs(q))) near_q = true;
        // a root shared with Q exists only at the special tau certified by
        // shared_root_check, and there the pair collapses onto the equal
        // family which is already recorded; drop either way
        if (near_q) continue;
        double b = f_map(k, tau, a);
        if (!(b > tol)) continue;
        // b is itself a root of U; snap it to the refined value
        double snapped = b, dist = std::numeric_limits<double>::infinity();
        for (double u : uroots) {
            double d = std::abs(u - b);
            if (d < dist) {
                dist = d;
                snapped = u;
            }
        }
        if (dist <= 1e-6 * std::max(1.0, std::abs(b))) b = snapped;
        double gap_scale = std::max({1.0, std::abs(a), std::abs(b)});
        if (std::abs(a - b) <= 1e-7 * gap_scale) continue;  // boundary-degenerate
        double hi = std::max(a, b), lo = std::min(a, b);
        polish_pair(k, tau, hi, lo);
        if (!(lo > 0.0)) continue;
        if (std::abs(hi - lo) <= 1e-7 * std::max(1.0, hi)) continue;
        auto res = pair_residuals(k, tau, hi, lo);
        double rscale = (hi + lo + tau) * std::pow(hi, k) + tau * hi + 2.0;
        if (std::abs(res.first) > std::max(tol, 1e-10 * rscale)) continue;
        if (std::abs(res.second) > std::max(tol, 1e-10 * rscale)) continue;
        bool dup = false;
        for (const auto &pr : pairs)
            if (std::abs(pr.first - hi) <= 1e-9 * std::max(1.0, hi) &&
                std::abs(pr.second - lo) <= 1e-9 * std::max(1.0, lo))
                dup = true;
        if (dup) continue;
        pairs.emplace_back(hi, lo);
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto &pr : pairs) {
        BoundaryLawPair bp;
        bp.params = p;
        bp.a = pr.first;
        bp.b = pr.second;
        bp.equal = false;
        auto res = pair_residuals(k, tau, bp.a, bp.b);
        bp.residual_a = res.first;
        bp.residual_b = res.second;
        out.push_back(bp);
    }
    return out;
}

std::vector<BoundaryLawPair> solve_k3(double tau, double tol) {
    if (!(tau > 2.0)) throw std::invalid_argument("tau must be > 2");
    const int k = 3;
    QuarticSolution qs = solve_quartic_ferrari(tau);
    std::vector<BoundaryLawPair> out;
    for (double x : qs.roots) {
        if (!(x > 0.0)) continue;
        double ab = x * x + tau / (x - tau);
        if (!(ab > 0.0)) continue;
        double rad = x * x - 4.0 * ab;
        double scale = std::max({1.0, x * x, 4.0 * std::abs(ab)});
        if (rad <= 1e-12 * scale) continue;  // a = b: boundary point, equal family
        double sq = std::sqrt(rad);
        double a = (x + sq) / 2.0, b = (x - sq) / 2.0;
        if (!(b > 0.0)) continue;
        polish_pair(k, tau, a, b);
        if (!(b > 0.0) || std::abs(a - b) <= 1e-12 * std::max(1.0, a)) continue;
        auto res = pair_residuals(k, tau, a, b);
        double rscale = (a + b + tau) * std::pow(a, k) + tau * a + 2.0;
        if (std::abs(res.first) > std::max(tol, 1e-10 * rscale)) continue;
        if (std::abs(res.second) > std::max(tol, 1e-10 * rscale)) continue;
        bool dup = false;
        for (const auto &bp : out)
            if (std::abs(bp.a - a) <= 1e-9 * std::max(1.0, a) &&
                std::abs(bp.b - b) <= 1e-9 * std::max(1.0, b))
                dup = true;
        if (dup) continue;
        BoundaryLawPair bp;
        bp.params = ModelParams(3, tau);
        bp.a = a;
        bp.b = b;
        bp.equal = false;
        bp.residual_a = res.first;
        bp.residual_b = res.second;
        out.push_back(bp);
    }
    std::sort(out.begin(), out.end(),
              [](const BoundaryLawPair &l, const BoundaryLawPair &r) { return l.a < r.a; });
    return out;
}

bool possibly_equal_pairs(const BoundaryLawPair &p1, const BoundaryLawPair &p2, double tol) {
    if (p1.params.k != p2.params.k ||
        std::abs(p1.params.tau - p2.params.tau) > tol * std::max(1.0, std::abs(p1.params.tau)))
        throw std::invalid_argument("pairs come from different models");
    double s1 = p1.sum(), s2 = p2.sum();
    if (std::abs(s1 - s2) <= tol * std::max({1.0, std::abs(s1), std::abs(s2)})) return true;
    double prod = s1 * s2;
    if (std::abs(prod - 4.0) <= tol * std::max(1.0, std::abs(prod))) return true;
    return false;
}

std::vector<std::vector<int>> identifiability_classes(const std::vector<BoundaryLawPair> &sols,
                                                      double tol) {
    int n = static_cast<int>(sols.size());
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (possibly_equal_pairs(sols[i], sols[j], tol)) parent[find(i)] = find(j);
    std::vector<std::vector<int>> classes;
    std::vector<int> root_of(n, -1);
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (root_of[r] < 0) {
            root_of[r] = static_cast<int>(classes.size());
            classes.emplace_back();
        }
        classes[root_of[r]].push_back(i);
    }
    return classes;
}

SolutionCount count_solutions_detail(const ModelParams &p, double tol) {
    std::vector<BoundaryLawPair> sols =
        (p.k == 3) ? [&] {
            // equal family from the generic solver, pairs from the closed route
            std::vector<BoundaryLawPair> v;
            for (const auto &s : solve_generic(p, tol))
                if (s.equal) v.push_back(s);
            for (const auto &s : solve_k3(p.tau, tol)) v.push_back(s);
            return v;
        }()
                    : solve_generic(p, tol);
    SolutionCount sc;
    for (const auto &s : sols) (s.equal ? sc.n_equal : sc.n_unequal)++;
    sc.n_total = sc.n_equal + sc.n_unequal;
    sc.n_ggm_upper = static_cast<int>(identifiability_classes(sols).size());
    sc.count = (p.k == 3) ? sc.n_ggm_upper : sc.n_total;
    return sc;
}

int count_solutions(const ModelParams &p, double tol) {
    return count_solutions_detail(p, tol).count;
}

}  // namespace sosggm
