#include <cmath>
#include <optional>
#include <vector>

#include "doctest.h"
#include "sosggm/boundary_law.hpp"

using namespace sosggm;

TEST_CASE("fixed point polynomials") {
    CHECK(build_Q(2, rat(6)).c == std::vector<rat>({rat(-2), rat(6), rat(-6), rat(2)}));
    CHECK(build_Q(3, rat(5)).c == std::vector<rat>({rat(-2), rat(5), rat(0), rat(-5), rat(2)}));

    Poly<rat> red = build_reduced(3, rat(5));
    CHECK(red.c == std::vector<rat>({rat(2), rat(-3), rat(-3), rat(2)}));
    CHECK(red.eval(rat(1, 2)) == 0);
    CHECK(red.eval(rat(2)) == 0);

    // Q = (a - 1) * reduced for any k, tau
    for (int k : {2, 3, 5}) {
        rat tau(17, 4);
        Poly<rat> lin({rat(-1), rat(1)});
        CHECK(build_Q(k, tau) == lin * build_reduced(k, tau));
    }
}

TEST_CASE("psi and its minimum") {
    CHECK(psi(2, 1.0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(psi(3, 1.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(psi(2, 2.0) == doctest::Approx(7.0).epsilon(1e-15));

    for (int k : {2, 3, 5}) {
        double at_one = psi(k, 1.0);
        CHECK(at_one == doctest::Approx(2.0 * (k + 1) / (k - 1)).epsilon(1e-14));
        for (int i = 1; i <= 400; ++i) {
            double a = 0.025 * i;
            if (std::fabs(a - 1.0) < 1e-12) continue;
            CHECK(psi(k, a) > at_one);
        }
    }
}

TEST_CASE("model parameters") {
    ModelParams mp(2, 6.0);
    CHECK(mp.theta + 1.0 / mp.theta == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(mp.theta > 0);
    CHECK(mp.theta < 1);
    CHECK(std::fabs(mp.theta - (3.0 - 2.0 * std::sqrt(2.0))) < 1e-14);

    ModelParams mq(3, rat(5));
    CHECK(mq.exact);
    CHECK(mq.tau_rat() == rat(5));
    CHECK(mq.tau == 5.0);

    CHECK_THROWS_AS(ModelParams(2, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(ModelParams(1, 5.0), std::invalid_argument);
}

TEST_CASE("critical values") {
    CriticalValues c2 = critical_values(2);
    CHECK(c2.tau_c == 6.0);
    CHECK(c2.tau_1 == 4.0);
    CHECK(std::fabs(c2.tau_2 - (2.0 + 2.0 * std::sqrt(5.0))) < 1e-12);

    CriticalValues c3 = critical_values(3);
    CHECK(c3.tau_c == 4.0);
    CHECK(c3.tau_1 == 3.0);
    CHECK(std::fabs(c3.tau_2 - 3.0 * std::sqrt(2.0)) < 1e-12);
    CHECK(c3.tau_cr_1 > 2.994);
    CHECK(c3.tau_cr_1 < 2.9946);
    CHECK(std::fabs(c3.tau_cr_2 - 3.0 * std::sqrt(2.0)) < 2e-6);

    CriticalValues c4 = critical_values(4);
    CHECK(c4.tau_c == doctest::Approx(10.0 / 3.0).epsilon(1e-15));
    CHECK(c4.tau_1 == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    CHECK(std::fabs(c4.tau_2 - 3.49735931389771) < 1e-9);

    // companion polynomial in L = (k-1)tau - 2k
    CHECK(tau2_companion_poly(2).c == std::vector<rat>({rat(-16), rat(4), rat(1)}));
    CHECK(tau2_companion_poly(3).c == std::vector<rat>({rat(-432), rat(108), rat(24), rat(1)}));
}

TEST_CASE("pair polynomial U") {
    // k = 2: U = tau a^4 - (2 - tau a)(Q - 2a^3), expanded at tau = 6
    CHECK(build_U(2, rat(6)).c ==
          std::vector<rat>({rat(4), rat(-24), rat(48), rat(-36), rat(6)}));

    CHECK(build_U(2, rat(5)).degree() == 4);
    CHECK(build_U(3, rat(5)).degree() == 8);
    CHECK(build_U(4, rat(5)).degree() == 16);

    // k = 3: U coincides with the degree-8 expansion in closed form
    for (rat tau : {rat(5), rat(7, 2)}) {
        rat t2 = tau * tau;
        Poly<rat> g({rat(8), rat(-12) * tau, rat(6) * t2, -(t2 - 8) * tau,
                     rat(-4) * (2 * t2 + 1), rat(2) * (t2 + 2) * tau, t2, -(t2 + 2) * tau,
                     t2 + 2});
        CHECK(build_U(3, tau) == g);
    }

    // product identity: P and Q*U agree up to a global sign, exactly
    for (int k : {2, 3, 4}) {
        rat tau(31, 6);
        Poly<rat> p = build_P(k, tau);
        Poly<rat> qu = build_Q(k, tau) * build_U(k, tau);
        CHECK((p + qu).is_zero());
    }
}

TEST_CASE("pair map f") {
    CHECK(f_map(2, 6.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f_map(3, 5.0, 2.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f_map(3, 5.0, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(f_map(2, 10.0, 12.0) < 0);  // caller filters non-positive images

    // unequal pairs are 2-cycles of f
    for (auto &p : solve_generic(ModelParams(2, 7.0))) {
        if (p.equal) continue;
        CHECK(std::fabs(f_map(2, 7.0, p.a) - p.b) < 1e-8);
        CHECK(std::fabs(f_map(2, 7.0, p.b) - p.a) < 1e-8);
    }
}

TEST_CASE("shared root detection") {
    auto r1 = shared_root_check(ModelParams(2, 4.0));
    REQUIRE(r1.has_value());
    CHECK(std::fabs(*r1 - 1.0) < 1e-12);

    double tau2 = 2.0 + 2.0 * std::sqrt(5.0);
    auto r2 = shared_root_check(ModelParams(2, tau2));
    REQUIRE(r2.has_value());
    CHECK(std::fabs(*r2 - 4.0 / tau2) < 1e-10);

    auto r3 = shared_root_check(ModelParams(3, 3.0 * std::sqrt(2.0)));
    REQUIRE(r3.has_value());
    CHECK(std::fabs(*r3 - 1.0 / std::sqrt(2.0)) < 1e-10);

    CHECK_FALSE(shared_root_check(ModelParams(2, 5.0)).has_value());
    CHECK_FALSE(shared_root_check(ModelParams(3, 4.2)).has_value());
}

TEST_CASE("pair system residuals and polish") {
    auto [ra, rb] = pair_residuals(3, 5.0, 2.0, 2.0);
    CHECK(std::fabs(ra) < 1e-14);
    CHECK(std::fabs(rb) < 1e-14);
    auto [rc, rd] = pair_residuals(3, 5.0, 0.5, 0.5);
    CHECK(std::fabs(rc) < 1e-14);
    CHECK(std::fabs(rd) < 1e-14);

    // swap symmetry of the zero-field system
    auto [s1, s2] = pair_residuals(2, 7.0, 1.3, 0.4);
    auto [t1, t2] = pair_residuals(2, 7.0, 0.4, 1.3);
    CHECK(s1 == doctest::Approx(t2).epsilon(1e-15));
    CHECK(s2 == doctest::Approx(t1).epsilon(1e-15));

    auto pairs = solve_k3(5.0);
    REQUIRE(pairs.size() == 2);
    double a = pairs[1].a * (1 + 1e-6), b = pairs[1].b * (1 - 1e-6);
    polish_pair(3, 5.0, a, b);
    auto [pa, pb] = pair_residuals(3, 5.0, a, b);
    CHECK(std::fabs(pa) < 1e-12);
    CHECK(std::fabs(pb) < 1e-12);
}

TEST_CASE("generic solver k=2") {
    auto low = solve_generic(ModelParams(2, 3.0));
    REQUIRE(low.size() == 1);
    CHECK(low[0].equal);
    CHECK(std::fabs(low[0].a - 1.0) < 1e-12);
    CHECK(std::fabs(low[0].b - 1.0) < 1e-12);

    auto sols = solve_generic(ModelParams(2, 7.0));
    REQUIRE(sols.size() == 5);
    CHECK(std::fabs(sols[0].a - 0.5) < 1e-10);
    CHECK(std::fabs(sols[1].a - 1.0) < 1e-10);
    CHECK(std::fabs(sols[2].a - 2.0) < 1e-10);
    for (int i = 0; i < 3; ++i) {
        CHECK(sols[i].equal);
        CHECK(sols[i].kind() == std::string("equal"));
    }
    CHECK_FALSE(sols[3].equal);
    CHECK_FALSE(sols[4].equal);

    // unequal sums follow x = (tau -/+ sqrt(tau^2 - 4 tau))/2 with a*b = 2x/tau
    double disc = std::sqrt(7.0 * 7.0 - 4.0 * 7.0);
    double xm = (7.0 - disc) / 2.0, xp = (7.0 + disc) / 2.0;
    CHECK(std::fabs(sols[3].sum() - xm) < 1e-9);
    CHECK(std::fabs(sols[4].sum() - xp) < 1e-9);
    CHECK(std::fabs(sols[3].a * sols[3].b - 2.0 * xm / 7.0) < 1e-9);
    CHECK(std::fabs(sols[4].a * sols[4].b - 2.0 * xp / 7.0) < 1e-9);
    CHECK(std::fabs(sols[4].a - 5.48988756349) < 1e-9);
    CHECK(std::fabs(sols[4].b - 0.30140028399) < 1e-9);

    for (auto &s : sols) {
        CHECK(s.a >= s.b);
        CHECK(std::fabs(s.residual_a) < 1e-10);
        CHECK(std::fabs(s.residual_b) < 1e-10);
    }
}

TEST_CASE("closed-form route k=3") {
    CHECK(solve_k3(2.5).empty());
    CHECK(solve_k3(3.0).size() == 1);   // the x = 2 branch is degenerate, one pair survives
    CHECK(solve_k3(3.5).size() == 1);
    CHECK(solve_k3(6.0).size() == 2);

    auto pairs = solve_k3(5.0);
    REQUIRE(pairs.size() == 2);
    for (auto &p : pairs) {
        CHECK_FALSE(p.equal);
        double x = p.sum();
        CHECK(std::fabs(x * x * x * x - 5 * x * x * x + 5 * x + 2) < 1e-8 * (1 + x * x * x * x));
        CHECK(std::fabs(p.residual_a) < 1e-10);
        CHECK(std::fabs(p.residual_b) < 1e-10);
    }

    // agreement with the generic route
    auto gen = solve_generic(ModelParams(3, 5.0));
    std::vector<BoundaryLawPair> gpairs;
    for (auto &s : gen)
        if (!s.equal) gpairs.push_back(s);
    REQUIRE(gpairs.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        CHECK(std::fabs(gpairs[i].a - pairs[i].a) < 1e-9);
        CHECK(std::fabs(gpairs[i].b - pairs[i].b) < 1e-9);
    }
}

TEST_CASE("reciprocal root product") {
    // the non-unit equal-family roots multiply to 1 above the critical coupling
    for (int k : {2, 3}) {
        double tau_c = 2.0 * (k + 1) / (k - 1);
        for (double tau : {tau_c + 0.5, tau_c + 1.0}) {
            RootSet rs = isolate_positive_roots(build_reduced(k, rat(tau)));
            REQUIRE(rs.roots.size() == 2);
            CHECK(std::fabs(rs.roots[0].value * rs.roots[1].value - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("identifiability classes and counts") {
    auto sols7 = solve_generic(ModelParams(2, 7.0));
    CHECK(identifiability_classes(sols7).size() == 4);

    auto s5 = solve_generic(ModelParams(2, 5.0));
    CHECK(identifiability_classes(s5).size() == 2);
    auto s62 = solve_generic(ModelParams(2, 6.2));
    CHECK(identifiability_classes(s62).size() == 3);

    // the two reciprocal equal solutions at k=2 merge: product of sums is 4
    CHECK(possibly_equal_pairs(s62[0], s62[2]));
    CHECK(possibly_equal_pairs(s62[0], s62[0]));
    CHECK_FALSE(possibly_equal_pairs(sols7[3], sols7[4]));

    SolutionCount c25 = count_solutions_detail(ModelParams(2, 2.5));
    CHECK(c25.n_equal == 1);
    CHECK(c25.n_unequal == 0);
    CHECK(c25.n_total == 1);
    CHECK(c25.count == 1);

    SolutionCount c5 = count_solutions_detail(ModelParams(2, 5.0));
    CHECK(c5.n_equal == 1);
    CHECK(c5.n_unequal == 1);
    CHECK(c5.n_total == 2);
    CHECK(c5.count == 2);

    SolutionCount c7 = count_solutions_detail(ModelParams(2, 7.0));
    CHECK(c7.n_equal == 3);
    CHECK(c7.n_unequal == 2);
    CHECK(c7.n_total == 5);
    CHECK(c7.n_ggm_upper == 4);
    CHECK(c7.count == 5);

    CHECK(count_solutions(ModelParams(2, 7.0)) == 5);
}

TEST_CASE("k=3 headline counts") {
    SolutionCount lo = count_solutions_detail(ModelParams(3, 2.5));
    CHECK(lo.n_total == 1);
    CHECK(lo.count == 1);

    // one pair already exists just above tau = 3
    SolutionCount c305 = count_solutions_detail(ModelParams(3, 3.05));
    CHECK(c305.n_equal == 1);
    CHECK(c305.n_unequal == 1);
    CHECK(c305.count == 2);

    SolutionCount c5 = count_solutions_detail(ModelParams(3, 5.0));
    CHECK(c5.n_equal == 3);
    CHECK(c5.n_unequal == 2);
    CHECK(c5.n_total == 5);
    CHECK(c5.n_ggm_upper == 4);
    CHECK(c5.count == 4);  // reciprocal equal roots induce the same measure
    CHECK(count_solutions(ModelParams(3, 5.0)) == 4);

    // isolated drop where the pair collides with the equal family
    CHECK(count_solutions(ModelParams(3, 3.0 * std::sqrt(2.0))) == 3);
}
