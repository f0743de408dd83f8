#pragma once
#include "sosggm/polynomial.hpp"
#include <optional>
#include <vector>

namespace sosggm {

// one isolated real root: [lo,hi] brackets exactly one sign change of the
// square-free part, value is the bisection+Newton refinement
struct RootRecord {
    double lo = 0, hi = 0;
    double value = 0;
    int multiplicity = 1;
    bool merged_cluster = false;  // float mode: nearby roots merged
};

struct RootSet {
    std::vector<RootRecord> roots;
    int count = 0;
};

// count of sign changes in the nonzero coefficients
int descartes_bound(const Poly<rat> &p);
int descartes_bound(const Poly<double> &p);

// exact division with remainder (both operands exact mode)
std::pair<Poly<rat>, Poly<rat>> divide_exact(const Poly<rat> &num, const Poly<rat> &den);

// all real roots in (0, inf), isolated by Sturm sequences on the square-free
// part, refined by bisection to width 1e-13 plus one guarded Newton step.
// multiplicities recovered from the gcd chain.
RootSet isolate_positive_roots(const Poly<rat> &p, double tol = 1e-12);
// float coefficients are lifted to exact rationals first; root clusters
// closer than 100*tol are merged and flagged
RootSet isolate_positive_roots(const Poly<double> &p, double tol = 1e-12);

struct CubicSolution {
    double delta = 0;  // (q/2)^2 + (p/3)^3 of the depressed cubic
    double p = 0, q = 0;
    struct Root {
        double x;
        int mult;
    };
    std::vector<Root> roots;  // real roots, distinct values
};

// a3 x^3 + a2 x^2 + a1 x + a0, closed form by discriminant cases
// (delta>0 one real root, delta=0 two distinct values, delta<0 three
// real roots in trigonometric form)
CubicSolution solve_cubic(double a3, double a2, double a1, double a0);

struct QuarticSolution {
    double c = 0;        // real resolvent root, Cardano branch
    double S = 0, T = 0; // Cardano radicals (NaN when trig form is used)
    double D = 0;        // resolvent discriminant
    double F = 0, R = 0; // depressed resolvent helpers: D = F^3 + R^2
    double radicand = 0; // radicand of the real-root quadratic factor
    bool factor1_posdef = false;
    std::vector<double> roots;  // real roots, descending; may be empty
};

// x^4 - tau x^3 + tau x + 2 = 0 via the Ferrari split with resolvent
// z^3 - (tau^2+8) z - 3 tau^2 = 0
QuarticSolution solve_quartic_ferrari(double tau);

}
