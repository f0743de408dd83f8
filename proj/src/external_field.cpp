#include "sosggm/external_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sosggm {

namespace {

double max_abs_residual(const FieldParams &fp, double a, double b) {
    auto r = residuals_abd(fp, a, b);
    return std::max(std::abs(r.first), std::abs(r.second));
}

// damped Newton on the field system, keeps the best iterate
bool newton_field(const FieldParams &fp, double &a, double &b, int iters) {
    const int k = fp.base.k;
    const double tau = fp.base.tau;
    double best_a = a, best_b = b;
    double best_r = max_abs_residual(fp, a, b);
    for (int it = 0; it < iters; ++it) {
        double s = a + b - tau;
        double ak = std::pow(a, k), bk = std::pow(b, k);
        double f1 = fp.h1 * s * ak + tau * a - 2.0;
        double f2 = fp.h2 * s * bk + tau * b - 2.0;
        double j11 = fp.h1 * (ak + s * k * ak / a) + tau;
        double j12 = fp.h1 * ak;
        double j21 = fp.h2 * bk;
        double j22 = fp.h2 * (bk + s * k * bk / b) + tau;
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double da = (f1 * j22 - f2 * j12) / det;
        double db = (f2 * j11 - f1 * j21) / det;
        double na = a, nb = b;
        bool ok = false;
        for (int damp = 0; damp < 8; ++damp) {
            na = a - da;
            nb = b - db;
            if (na > 0.0 && nb > 0.0 && max_abs_residual(fp, na, nb) < best_r) {
                ok = true;
                break;
            }
            da /= 2;
            db /= 2;
        }
        if (!ok) break;
        a = na;
        b = nb;
        double r = max_abs_residual(fp, a, b);
        if (r < best_r) {
            best_r = r;
            best_a = a;
            best_b = b;
        }
        if (r == 0.0) break;
    }
    a = best_a;
    b = best_b;
    double scale = (std::abs(a + b) + tau) * std::max(fp.h1, fp.h2) *
                       std::pow(std::max(a, b), k) +
                   tau * std::max(a, b) + 2.0;
    return best_r <= 1e-11 * scale;
}

}  // namespace

FieldParams::FieldParams(const ModelParams &base_, double h1_, double h2_) {
    if (!(h1_ > 0.0) || !(h2_ > 0.0)) throw std::invalid_argument("field values must be positive");
    base = base_;
    h1 = h1_;
    h2 = h2_;
}

FieldParams::FieldParams(const ModelParams &base_, const rat &h1_, const rat &h2_)
    : FieldParams(base_, to_double(h1_), to_double(h2_)) {
    exact = true;
    h1_q = h1_;
    h2_q = h2_;
}

double FieldParams::h_residue(int r) const {
    int m = ((r % 4) + 4) % 4;
    if (m == 1) return h2;  // heights 4m+1
    if (m == 3) return h1;  // heights 4m-1
    return 1.0;
}

const char *branch_name(FieldBranch b) {
    switch (b) {
        case FieldBranch::equal: return "equal";
        case FieldBranch::sum_plus: return "sum_plus";
        case FieldBranch::sum_minus: return "sum_minus";
        default: return "other";
    }
}

std::pair<double, double> residuals_abd(const FieldParams &fp, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("a and b must be positive");
    const int k = fp.base.k;
    const double tau = fp.base.tau;
    double s = a + b - tau;
    double ra = fp.h1 * s * std::pow(a, k) + tau * a - 2.0;
    double rb = fp.h2 * s * std::pow(b, k) + tau * b - 2.0;
    return {ra, rb};
}

namespace {

template <typename Num>
RegionTag classify_region_impl(const Num &tau, const Num &h) {
    RegionTag tag;
    if (!(tau > 2) || !(h > 0)) throw std::invalid_argument("need tau > 2 and h > 0");
    bool tau_ge_4 = tau >= 4;
    bool tau_mid = (tau * tau > 8) && (tau < 4);  // 2*sqrt(2) < tau < 4
    if (tau_ge_4) {
        tag.in_A = (h * tau >= 4);
        Num curve = tau * tau * tau / (8 * (tau * tau - 8));
        tag.in_B = (h * tau >= 4) && (h <= curve);
    } else if (tau_mid) {
        Num curve = tau * tau * tau / (8 * (tau * tau - 8));
        tag.in_A = (h >= curve);
        tag.in_B = false;
    }
    if (tag.in_A && tag.in_B) tag.value = "both-boundary";
    else if (tag.in_A) tag.value = "A";
    else if (tag.in_B) tag.value = "B";
    else tag.value = "neither";
    return tag;
}

}  // namespace

RegionTag classify_region(double tau, double h) { return classify_region_impl<double>(tau, h); }
RegionTag classify_region(const rat &tau, const rat &h) { return classify_region_impl<rat>(tau, h); }

std::vector<FieldSolution> solve_k2_uniform(double tau, double h, double tol) {
    if (!(tau > 2.0)) throw std::invalid_argument("tau must be > 2");
    if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
    ModelParams mp(2, tau);
    FieldParams fp(mp, h, h);
    std::vector<FieldSolution> out;

    // a = b branch: 2h a^3 - h tau a^2 + tau a - 2 = 0
    CubicSolution cs = solve_cubic(2.0 * h, -h * tau, tau, -2.0);
    std::vector<double> cubic_roots;
    for (const auto &r : cs.roots) cubic_roots.push_back(r.x);
    std::sort(cubic_roots.begin(), cubic_roots.end());
    int idx = 1;
    for (double a : cubic_roots) {
        if (!(a > 0.0)) throw std::runtime_error("cubic branch produced a non-positive root");
        // 1-D Newton on the cubic keeps the a = b constraint exact
        for (int it = 0; it < 3; ++it) {
            double g = ((2.0 * h * a - h * tau) * a + tau) * a - 2.0;
            double dg = (6.0 * h * a - 2.0 * h * tau) * a + tau;
            if (dg == 0.0) break;
            double step = g / dg;
            if (!std::isfinite(step)) break;
            a -= step;
        }
        double b = a;
        FieldSolution s;
        s.params = fp;
        s.a = a;
        s.b = b;
        s.branch = FieldBranch::equal;
        s.index = idx++;
        auto res = residuals_abd(fp, a, b);
        s.residual_a = res.first;
        s.residual_b = res.second;
        out.push_back(s);
    }

    RegionTag region = classify_region(tau, h);
    double ht = h * tau;
    double x_rad = ht * (ht - 4.0);
    if (x_rad > -1e-12 * std::max(1.0, ht * ht)) {
        x_rad = std::max(x_rad, 0.0);
        double sq = std::sqrt(x_rad);
        struct Branch {
            double x;
            bool live;
            FieldBranch tag;
            int base_index;
        };
        Branch branches[2] = {
            {(ht + sq) / (2.0 * h), region.in_A, FieldBranch::sum_plus, 4},
            {(ht - sq) / (2.0 * h), region.in_B, FieldBranch::sum_minus, 6},
        };
        for (const auto &br : branches) {
            if (!br.live) continue;
            double x = br.x;
            double ab = 2.0 * x / tau;
            double rad = x * x - 4.0 * ab;
            double scale = std::max({1.0, x * x, 4.0 * std::abs(ab)});
            if (rad <= 1e-12 * scale) continue;  // degenerate pair lies on the cubic branch
            double lo = (x - std::sqrt(rad)) / 2.0;
            double hi = (x + std::sqrt(rad)) / 2.0;
            if (!(lo > 0.0)) continue;
            {
                double pa = lo, pb = hi;
                newton_field(fp, pa, pb, 3);
                lo = pa;
                hi = pb;
            }
            for (int ordered = 0; ordered < 2; ++ordered) {
                FieldSolution s;
                s.params = fp;
                s.a = ordered == 0 ? lo : hi;
                s.b = ordered == 0 ? hi : lo;
                s.branch = br.tag;
                s.index = br.base_index + ordered;
                auto res = residuals_abd(fp, s.a, s.b);
                s.residual_a = res.first;
                s.residual_b = res.second;
                double rscale =
                    (s.a + s.b + tau) * h * std::pow(std::max(s.a, s.b), 2) + tau * std::max(s.a, s.b) + 2.0;
                if (std::abs(s.residual_a) > std::max(tol, 1e-10 * rscale)) continue;
                if (std::abs(s.residual_b) > std::max(tol, 1e-10 * rscale)) continue;
                out.push_back(s);
            }
        }
    }

    // cross-branch dedup (double roots, h*tau = 4 coincidences)
    std::vector<FieldSolution> dedup;
    for (const auto &s : out) {
        bool seen = false;
        for (const auto &d : dedup)
            if (std::abs(s.a - d.a) <= 1e-8 * std::max(1.0, std::abs(d.a)) &&
                std::abs(s.b - d.b) <= 1e-8 * std::max(1.0, std::abs(d.b)))
                seen = true;
        if (!seen) dedup.push_back(s);
    }
    return dedup;
}

std::vector<FieldSolution> enumerate_measure_candidates(double tau, double h, double tol) {
    std::vector<FieldSolution> sols = solve_k2_uniform(tau, h, tol);
    int idx = 1;
    for (auto &s : sols) s.index = idx++;
    return sols;
}

std::vector<FieldSolution> solve_field_generic(const FieldParams &fp, double tol) {
    const double tau = fp.base.tau;
    std::vector<FieldSolution> out;
    // 10 x 5 deterministic start grid on (0, tau)^2
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 5; ++j) {
            double a = tau * (i + 0.5) / 10.0;
            double b = tau * (j + 0.5) / 5.0;
            if (!newton_field(fp, a, b, 60)) continue;
            double rscale = (a + b + tau) * std::max(fp.h1, fp.h2) *
                                std::pow(std::max(a, b), fp.base.k) +
                            tau * std::max(a, b) + 2.0;
            auto res = residuals_abd(fp, a, b);
            if (std::abs(res.first) > std::max(tol, 1e-10 * rscale)) continue;
            if (std::abs(res.second) > std::max(tol, 1e-10 * rscale)) continue;
            FieldSolution s;
            s.params = fp;
            s.a = a;
            s.b = b;
            s.branch = std::abs(a - b) <= 1e-8 * std::max(1.0, a) ? FieldBranch::equal
                                                                  : FieldBranch::other;
            s.residual_a = res.first;
            s.residual_b = res.second;
            bool seen = false;
            for (const auto &d : out)
                if (std::abs(s.a - d.a) <= 1e-8 * std::max(1.0, std::abs(d.a)) &&
                    std::abs(s.b - d.b) <= 1e-8 * std::max(1.0, std::abs(d.b)))
                    seen = true;
            if (!seen) out.push_back(s);
        }
    }
    std::sort(out.begin(), out.end(), [](const FieldSolution &l, const FieldSolution &r) {
        return l.a != r.a ? l.a < r.a : l.b < r.b;
    });
    int idx = 1;
    for (auto &s : out) s.index = idx++;
    return out;
}

}  // namespace sosggm
