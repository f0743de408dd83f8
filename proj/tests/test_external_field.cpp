#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sosggm/external_field.hpp"
#include "sosggm/polyroots.hpp"

using namespace sosggm;

namespace {

bool contains_pair(const std::vector<FieldSolution> &v, double a, double b, double tol) {
    for (auto &s : v)
        if (std::fabs(s.a - a) < tol && std::fabs(s.b - b) < tol) return true;
    return false;
}

}  // namespace

TEST_CASE("field parameters") {
    FieldParams fp(ModelParams(2, 5.0), 0.9, 1.1);
    CHECK(fp.h_residue(0) == 1.0);
    CHECK(fp.h_residue(2) == 1.0);
    CHECK(fp.h_residue(1) == 1.1);
    CHECK(fp.h_residue(3) == 0.9);

    CHECK_THROWS_AS(FieldParams(ModelParams(2, 5.0), -0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(FieldParams(ModelParams(2, 5.0), 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("field system residuals") {
    // h = 1 collapses to the zero-field pair system
    FieldParams unit(ModelParams(2, 7.0), 1.0, 1.0);
    for (double a : {0.5, 1.0, 2.0}) {
        auto [ra, rb] = residuals_abd(unit, a, a);
        CHECK(std::fabs(ra) < 1e-12);
        CHECK(std::fabs(rb) < 1e-12);
    }
    auto [ga, gb] = residuals_abd(unit, 1.3, 0.4);
    auto [pa, pb] = pair_residuals(2, 7.0, 1.3, 0.4);
    CHECK(ga == doctest::Approx(pa).epsilon(1e-15));
    CHECK(gb == doctest::Approx(pb).epsilon(1e-15));

    // exact rational solution of the tilted system
    FieldParams tilt(ModelParams(2, 5.0), 0.9, 0.9);
    auto [ta, tb] = residuals_abd(tilt, 1.0, 2.0 / 3.0);
    CHECK(std::fabs(ta) < 1e-14);
    CHECK(std::fabs(tb) < 1e-14);

    // a = b = 2/tau never solves the system
    auto [na, nb] = residuals_abd(tilt, 0.4, 0.4);
    CHECK(std::fabs(na) > 1e-3);
}

TEST_CASE("region classification") {
    RegionTag r1 = classify_region(4.0, 1.0);
    CHECK(r1.in_A);
    CHECK(r1.in_B);
    CHECK(r1.value == "both-boundary");

    CHECK(classify_region(5.0, 0.5).value == "neither");
    CHECK(classify_region(3.0, 10.0).value == "A");
    CHECK_FALSE(classify_region(3.0, 10.0).in_B);
    CHECK(classify_region(5.0, 0.9).value == "both-boundary");
    CHECK(classify_region(5.0, 2.0).value == "A");
    CHECK(classify_region(2.5, 10.0).value == "neither");

    // exact arithmetic on the boundary curves
    RegionTag rq = classify_region(rat(4), rat(1));
    CHECK(rq.in_A);
    CHECK(rq.in_B);
}

TEST_CASE("uniform field closed solver") {
    auto base = solve_k2_uniform(3.0, 1.0);
    REQUIRE(base.size() == 1);
    CHECK(base[0].branch == FieldBranch::equal);
    CHECK(std::fabs(base[0].a - 1.0) < 1e-12);
    CHECK(std::fabs(base[0].b - 1.0) < 1e-12);

    // on the curve h*tau = 4 the two sum branches collide into a = b
    auto edge = solve_k2_uniform(4.0, 1.0);
    REQUIRE(edge.size() == 1);
    CHECK(std::fabs(edge[0].a - 1.0) < 1e-10);
    CHECK(std::fabs(edge[0].b - 1.0) < 1e-10);

    auto lone = solve_k2_uniform(5.0, 0.7);
    REQUIRE(lone.size() == 1);
    CHECK(lone[0].branch == FieldBranch::equal);

    auto five = solve_k2_uniform(5.0, 0.9);
    REQUIRE(five.size() == 5);
    int n_eq = 0, n_plus = 0, n_minus = 0;
    for (auto &s : five) {
        if (s.branch == FieldBranch::equal) ++n_eq;
        if (s.branch == FieldBranch::sum_plus) ++n_plus;
        if (s.branch == FieldBranch::sum_minus) ++n_minus;
        auto [ra, rb] = residuals_abd(s.params, s.a, s.b);
        CHECK(std::fabs(ra) < 1e-10);
        CHECK(std::fabs(rb) < 1e-10);
    }
    CHECK(n_eq == 1);
    CHECK(n_plus == 2);
    CHECK(n_minus == 2);

    double r13 = std::sqrt(13.0);
    CHECK(contains_pair(five, 1.0, 2.0 / 3.0, 1e-9));
    CHECK(contains_pair(five, 2.0 / 3.0, 1.0, 1e-9));
    CHECK(contains_pair(five, (5.0 + r13) / 3.0, (5.0 - r13) / 3.0, 1e-9));
    CHECK(contains_pair(five, (5.0 - r13) / 3.0, (5.0 + r13) / 3.0, 1e-9));

    // each live branch carries the ordered pair and its swap
    for (auto &s : five) {
        if (s.branch == FieldBranch::equal) continue;
        CHECK(contains_pair(five, s.b, s.a, 1e-9));
        double x = (s.branch == FieldBranch::sum_plus)
                       ? (0.9 * 5 + std::sqrt(0.9 * 5 * (0.9 * 5 - 4))) / (2 * 0.9)
                       : (0.9 * 5 - std::sqrt(0.9 * 5 * (0.9 * 5 - 4))) / (2 * 0.9);
        CHECK(std::fabs(s.a + s.b - x) < 1e-9);
        CHECK(std::fabs(s.a * s.b - 2.0 * x / 5.0) < 1e-9);
    }

    // seven candidates deep in both regions
    auto seven = solve_k2_uniform(7.0, 1.0);
    CHECK(seven.size() == 7);
    auto cand = enumerate_measure_candidates(7.0, 1.0);
    REQUIRE(cand.size() == 7);
    for (size_t i = 1; i < cand.size(); ++i) CHECK(cand[i].index > cand[i - 1].index);

    // h = 1 reproduces the zero-field solution set
    auto zf = solve_generic(ModelParams(2, 7.0));
    for (auto &s : zf) {
        CHECK(contains_pair(seven, s.a, s.b, 1e-9));
        if (!s.equal) CHECK(contains_pair(seven, s.b, s.a, 1e-9));
    }
}

TEST_CASE("equal branch cubic") {
    // sign pattern forces all real roots positive
    for (auto [tau, h] : std::vector<std::pair<double, double>>{{5, 0.5}, {7, 1.3}, {3.2, 2.0}}) {
        CubicSolution cs = solve_cubic(2 * h, -h * tau, tau, -2);
        for (auto &r : cs.roots) CHECK(r.x > 0);
    }

    // double-root crossing of the equal branch along tau at fixed h
    double h = 0.8, lo = 5.0, hi = 9.0;
    CHECK(solve_cubic(2 * h, -h * lo, lo, -2).delta > 0);
    CHECK(solve_cubic(2 * h, -h * hi, hi, -2).delta < 0);
    for (int i = 0; i < 80; ++i) {
        double mid = 0.5 * (lo + hi);
        (solve_cubic(2 * h, -h * mid, mid, -2).delta > 0 ? lo : hi) = mid;
    }
    CHECK(lo > 5.0);
    CHECK(hi < 9.0);
    CubicSolution at = solve_cubic(2 * h, -h * hi, hi, -2);
    double gap = 1e9;
    for (size_t i = 0; i < at.roots.size(); ++i)
        for (size_t j = i + 1; j < at.roots.size(); ++j)
            gap = std::min(gap, std::fabs(at.roots[i].x - at.roots[j].x));
    bool collided = at.roots.size() == 2 || gap < 1e-4;
    CHECK(collided);
}

TEST_CASE("generic field solver") {
    // non-uniform field, k = 2
    FieldParams fp(ModelParams(2, 5.0), 0.9, 1.1);
    auto sols = solve_field_generic(fp);
    REQUIRE(!sols.empty());
    for (auto &s : sols) {
        CHECK(s.a > 0);
        CHECK(s.b > 0);
        auto [ra, rb] = residuals_abd(fp, s.a, s.b);
        CHECK(std::fabs(ra) < 1e-8);
        CHECK(std::fabs(rb) < 1e-8);
    }
    for (size_t i = 1; i < sols.size(); ++i) {
        bool ordered = sols[i - 1].a < sols[i].a ||
                       (sols[i - 1].a == sols[i].a && sols[i - 1].b < sols[i].b);
        CHECK(ordered);
    }

    // k = 3 with unit field finds the free fixed point
    FieldParams f3(ModelParams(3, 5.0), 1.0, 1.0);
    auto s3 = solve_field_generic(f3);
    CHECK(contains_pair(s3, 1.0, 1.0, 1e-9));
    CHECK(contains_pair(s3, 2.0, 2.0, 1e-9));
    CHECK(contains_pair(s3, 0.5, 0.5, 1e-9));
}
