#include "sosggm/polyroots.hpp"
#include <cmath>

namespace sosggm {

namespace {

template <class T>
int sign_changes_in_coeffs(const std::vector<T> &c) {
    int changes = 0, last = 0;
    for (const auto &x : c) {
        int s = (x > 0) - (x < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

// Sturm chain: p, p', then negated remainders; positive rescaling only
std::vector<Poly<rat>> sturm_chain(const Poly<rat> &p) {
    std::vector<Poly<rat>> chain;
    auto normalize = [](Poly<rat> &f) {
        if (f.is_zero()) return;
        rat m = 0;
        for (auto &x : f.c) m = std::max(m, rat(abs(x)));
        for (auto &x : f.c) x /= m;
    };
    Poly<rat> a = p, b = p.derivative();
    normalize(a);
    normalize(b);
    chain.push_back(a);
    while (!b.is_zero()) {
        chain.push_back(b);
        auto [q, r] = poly_divrem(a, b);
        (void)q;
        r *= rat(-1);
        normalize(r);
        a = std::move(b);
        b = std::move(r);
    }
    return chain;
}

int sign_variations_at(const std::vector<Poly<rat>> &chain, const rat &x) {
    int changes = 0, last = 0;
    for (const auto &f : chain) {
        int s = sgn(f.eval(x));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

rat cauchy_bound(const Poly<rat> &p) {
    rat m = 0;
    rat lead = abs(p.lead());
    for (size_t i = 0; i + 1 < p.c.size(); ++i) m = std::max(m, rat(abs(p.c[i]) / lead));
    return m + 1;
}

// roots of p in (lo, hi], given the Sturm chain of p
int sturm_count(const std::vector<Poly<rat>> &chain, const rat &lo, const rat &hi) {
    return sign_variations_at(chain, lo) - sign_variations_at(chain, hi);
}

struct Isolated {
    rat lo, hi;    // sf has exactly one root in (lo, hi]
    bool exact;    // root is exactly hi
};

std::vector<Isolated> isolate_on_positive_axis(const Poly<rat> &sf,
                                               const std::vector<Poly<rat>> &chain) {
    std::vector<Isolated> out;
    rat B = cauchy_bound(sf);
    struct Seg {
        rat lo, hi;
        int n;
    };
    std::vector<Seg> stack;
    int n0 = sturm_count(chain, rat(0), B);
    if (n0 > 0) stack.push_back({rat(0), B, n0});
    while (!stack.empty()) {
        Seg s = stack.back();
        stack.pop_back();
        if (s.n == 1 && sgn(sf.eval(s.hi)) != 0) {
            out.push_back({s.lo, s.hi, false});
            continue;
        }
        rat mid = (s.n == 1) ? s.hi : (s.lo + s.hi) / 2;
        if (sgn(sf.eval(mid)) == 0) {
            // exact rational root at mid: shrink a pocket around it, then
            // recurse on what is left on either side
            rat delta = (mid - s.lo) / 2;
            while (sturm_count(chain, mid - delta, mid) > 1) delta /= 2;
            out.push_back({mid - delta, mid, true});
            int nl = sturm_count(chain, s.lo, mid - delta);
            if (nl > 0) stack.push_back({s.lo, mid - delta, nl});
            int nr = s.n - nl - 1;
            if (nr > 0) stack.push_back({mid, s.hi, nr});
            continue;
        }
        int nl = sturm_count(chain, s.lo, mid);
        int nr = s.n - nl;
        if (nl > 0) stack.push_back({s.lo, mid, nl});
        if (nr > 0) stack.push_back({mid, s.hi, nr});
    }
    std::sort(out.begin(), out.end(), [](const Isolated &a, const Isolated &b) {
        return a.hi < b.hi;
    });
    return out;
}

double refine_root(const Poly<rat> &sf, rat lo, rat hi, bool exact) {
    if (exact) return to_double(hi);
    int s_hi = sgn(sf.eval(hi));
    // bisection on exact signs until width below 1e-13
    rat width_target(1);
    width_target /= bigint(10000000000000LL);  // 1e-13
    while (hi - lo > width_target) {
        rat mid = (lo + hi) / 2;
        int sm = sgn(sf.eval(mid));
        if (sm == 0) return to_double(mid);
        if (sm == s_hi) hi = mid;
        else lo = mid;
    }
    double x = to_double((lo + hi) / 2);
    // one guarded Newton step on the square-free part
    double fx = eval_double(sf, x);
    double dx = eval_double(sf.derivative(), x);
    if (dx != 0) {
        double xn = x - fx / dx;
        if (xn > to_double(lo) && xn < to_double(hi)) x = xn;
    }
    return x;
}

int root_multiplicity(const Poly<rat> &p, const rat &lo, const rat &hi) {
    // the root lies in (lo, hi]; count how deep it survives the gcd chain
    Poly<rat> q = p;
    int mult = 0;
    while (q.degree() >= 1) {
        auto chain = sturm_chain(q);
        if (sturm_count(chain, lo, hi) < 1) break;
        ++mult;
        q = poly_gcd(q, q.derivative());
    }
    return mult == 0 ? 1 : mult;
}

}  // namespace

int descartes_bound(const Poly<rat> &p) { return sign_changes_in_coeffs(p.c); }
int descartes_bound(const Poly<double> &p) { return sign_changes_in_coeffs(p.c); }

std::pair<Poly<rat>, Poly<rat>> divide_exact(const Poly<rat> &num, const Poly<rat> &den) {
    return poly_divrem(num, den);
}

RootSet isolate_positive_roots(const Poly<rat> &p, double tol) {
    if (p.is_zero()) throw std::invalid_argument("zero polynomial");
    (void)tol;
    // strip x^m factor; x=0 is not a positive root
    Poly<rat> work = p;
    size_t k0 = 0;
    while (k0 < work.c.size() && work.c[k0] == 0) ++k0;
    if (k0 > 0) work.c.erase(work.c.begin(), work.c.begin() + k0);

    RootSet rs;
    if (work.degree() < 1) return rs;
    Poly<rat> g = poly_gcd(work, work.derivative());
    Poly<rat> sf = work;
    if (g.degree() >= 1) sf = divide_exact(work, g).first;
    auto chain = sturm_chain(sf);
    auto intervals = isolate_on_positive_axis(sf, chain);
    for (auto &iv : intervals) {
        RootRecord r;
        r.value = refine_root(sf, iv.lo, iv.hi, iv.exact);
        r.lo = to_double(iv.lo);
        r.hi = to_double(iv.hi);
        r.multiplicity = (g.degree() >= 1) ? root_multiplicity(work, iv.lo, iv.hi) : 1;
        rs.roots.push_back(r);
    }
    std::sort(rs.roots.begin(), rs.roots.end(),
              [](const RootRecord &a, const RootRecord &b) { return a.value < b.value; });
    rs.count = 0;
    for (auto &r : rs.roots) rs.count += r.multiplicity;
    return rs;
}

RootSet isolate_positive_roots(const Poly<double> &p, double tol) {
    RootSet rs = isolate_positive_roots(to_rat_poly(p), tol);
    // merge clusters within 100*tol
    RootSet merged;
    for (auto &r : rs.roots) {
        if (!merged.roots.empty() &&
            std::abs(r.value - merged.roots.back().value) < 100 * tol) {
            merged.roots.back().multiplicity += r.multiplicity;
            merged.roots.back().merged_cluster = true;
            merged.roots.back().hi = r.hi;
            continue;
        }
        merged.roots.push_back(r);
    }
    merged.count = 0;
    for (auto &r : merged.roots) merged.count += r.multiplicity;
    return merged;
}

CubicSolution solve_cubic(double a3, double a2, double a1, double a0) {
    if (a3 == 0) throw std::invalid_argument("not a cubic: leading coefficient is zero");
    double A = a2 / a3, B = a1 / a3, C = a0 / a3;
    CubicSolution sol;
    double p = B - A * A / 3;
    double q = 2 * A * A * A / 27 - A * B / 3 + C;
    sol.p = p;
    sol.q = q;
    double delta = (q / 2) * (q / 2) + (p / 3) * (p / 3) * (p / 3);
    sol.delta = delta;
    double shift = -A / 3;
    double scale = std::max({std::abs(q * q / 4), std::abs(p * p * p / 27), 1e-30});
    if (std::abs(delta) <= 1e-14 * scale) {
        sol.delta = 0;
        if (std::abs(p) <= 1e-14 * (1 + std::abs(B))) {
            sol.roots.push_back({shift, 3});
        } else {
            double d = std::cbrt(q / 2);
            sol.roots.push_back({-2 * d + shift, 1});
            sol.roots.push_back({d + shift, 2});
        }
    } else if (delta > 0) {
        double sq = std::sqrt(delta);
        double y = std::cbrt(-q / 2 + sq) + std::cbrt(-q / 2 - sq);
        sol.roots.push_back({y + shift, 1});
    } else {
        double r = std::sqrt(-p * p * p / 27);
        double arg = std::clamp(-q / (2 * r), -1.0, 1.0);
        double phi = std::acos(arg);
        double m = 2 * std::sqrt(-p / 3);
        for (int j = 0; j < 3; ++j)
            sol.roots.push_back({m * std::cos((phi - 2 * M_PI * j) / 3) + shift, 1});
        std::sort(sol.roots.begin(), sol.roots.end(),
                  [](auto &a, auto &b) { return a.x < b.x; });
    }
    return sol;
}

QuarticSolution solve_quartic_ferrari(double tau) {
    QuarticSolution s;
    s.F = -(tau * tau + 8) / 3;
    s.R = 1.5 * tau * tau;
    s.D = s.F * s.F * s.F + s.R * s.R;
    if (s.D >= 0) {
        double sq = std::sqrt(s.D);
        s.S = std::cbrt(s.R + sq);
        s.T = std::cbrt(s.R - sq);
        s.c = s.S + s.T;
    } else {
        // three real resolvent roots; the Cardano branch continues to the largest
        s.S = s.T = std::nan("");
        double m = std::sqrt(-s.F);
        double phi = std::acos(std::clamp(s.R / (m * m * m), -1.0, 1.0));
        s.c = 2 * m * std::cos(phi / 3);
    }
    double halfsum = std::sqrt(tau * tau / 4 + s.c) + tau / 2;  // M + tau/2
    double n2 = s.c * s.c - 8;
    if (n2 < 0) {
        s.radicand = std::nan("");
        return s;  // no real factorization of this shape; no real roots reported
    }
    s.radicand = halfsum * halfsum - 2 * s.c - 2 * std::sqrt(n2);
    // first quadratic factor x^2 + (M - tau/2) x + c/2 - N: check definiteness
    double m1 = std::sqrt(tau * tau / 4 + s.c) - tau / 2;
    double disc1 = m1 * m1 - 4 * (s.c / 2 - std::sqrt(n2) / 2);
    s.factor1_posdef = disc1 < 0;
    if (s.radicand >= 0) {
        double r = std::sqrt(s.radicand);
        s.roots.push_back((halfsum + r) / 2);
        if (r > 0) s.roots.push_back((halfsum - r) / 2);
    }
    return s;
}

}
