#pragma once

#include <optional>
#include <vector>

#include "polynomial.hpp"
#include "polyroots.hpp"
#include "rational.hpp"

namespace sosggm {

// Model parameters for the SOS interaction on the Cayley tree of branching k.
// tau = theta + 1/theta with theta = exp(-J*beta) in (0,1).
struct ModelParams {
    int k = 2;
    double tau = 0.0;
    double theta = 0.0;
    double beta_J = 0.0;
    bool exact = false;  // tau_q holds the exact rational value
    rat tau_q = rat(0);

    ModelParams() = default;
    ModelParams(int k_, double tau_);
    ModelParams(int k_, const rat &tau_);

    rat tau_rat() const { return exact ? tau_q : rat(tau); }
};

// One positive solution (a, b) of the 4-periodic fixed point system
//   (a + b - tau) a^k + tau a - 2 = 0
//   (a + b - tau) b^k + tau b - 2 = 0
// stored as an unordered pair with canonical order a >= b.
struct BoundaryLawPair {
    ModelParams params;
    double a = 0.0;
    double b = 0.0;
    double residual_a = 0.0;
    double residual_b = 0.0;
    bool equal = false;

    const char *kind() const { return equal ? "equal" : "unequal"; }
    double sum() const { return a + b; }
};

struct CriticalValues {
    int k = 0;
    double tau_c = 0.0;   // 2(k+1)/(k-1)
    double tau_1 = 0.0;   // 2k/(k-1)
    double tau_2 = 0.0;   // from the degree-k companion polynomial in L
    double tau_cr_1 = 0.0;  // k = 3 only: first change of the pair count
    double tau_cr_2 = 0.0;  // k = 3 only: second change of the pair count
};

struct SolutionCount {
    int n_equal = 0;     // distinct positive roots of Q (a = b family)
    int n_unequal = 0;   // unordered pairs with a != b
    int n_total = 0;
    int n_ggm_upper = 0;  // classes after the identifiability merge
    int count = 0;        // headline count: n_total for k=2, classes for k=3
};

// Q(a) = 2a^{k+1} - tau a^k + tau a - 2; the a = b family.
Poly<rat> build_Q(int k, const rat &tau);
inline Poly<rat> build_Q(const ModelParams &p) { return build_Q(p.k, p.tau_rat()); }

// Q(a) / (a - 1) = 2a^k + (2 - tau)(a^{k-1} + ... + a) + 2, exact.
Poly<rat> build_reduced(int k, const rat &tau);
inline Poly<rat> build_reduced(const ModelParams &p) {
    return build_reduced(p.k, p.tau_rat());
}

// psi_k(a) = 2 + 2(a^k + 1) / (a^{k-1} + ... + a); min over a>0 at a=1.
double psi(int k, double a);

CriticalValues critical_values(int k);

// Companion polynomial in L = (k-1)tau - 2k whose unique positive root
// gives tau_2 = (L + 2k)/(k - 1):
// sum_{j=0}^{k-2} C(k+1,j) (2k)^j L^{k-j} + (k(k-1)/2)(2k)^{k-1} L - (k-1)(2k)^k.
Poly<rat> tau2_companion_poly(int k);

// U(a) = tau a^{k^2} - (2 - tau a) sum_{j=0}^{k-1} (-1)^{k-j} C(k,j) a^{(k+1)j} Q^{k-j-1}(a).
// Unequal-pair coordinates are positive roots of U; degree k^2 for even k
// (the top terms cancel for odd k).
Poly<rat> build_U(int k, const rat &tau);
inline Poly<rat> build_U(const ModelParams &p) { return build_U(p.k, p.tau_rat()); }

// P(a) = (2 - tau a)(2 - tau a + tau a^k - a^{k+1})^k
//        - a^{k^2} (tau a^{k+1} + (2 - tau^2) a^k + tau^2 a - 2 tau),
// the full fixed point polynomial of a = f(f(a)); P = -(Q * U).
Poly<rat> build_P(int k, const rat &tau);
inline Poly<rat> build_P(const ModelParams &p) { return build_P(p.k, p.tau_rat()); }

// f(b) = tau - b + (2 - tau b) b^{-k}; may be non-positive, caller filters.
double f_map(int k, double tau, double b);
inline double f_map(const ModelParams &p, double b) { return f_map(p.k, p.tau, b); }

// If (k-1)^k tau^{k+1} - (k-1) 2^{k-1} k^k tau^2 + (2k)^{k+1} = 0 holds at
// this tau (relative to the sum of term magnitudes), Q and U share the root
// a = 2k / (tau (k-1)); returns that root, otherwise nullopt.
std::optional<double> shared_root_check(const ModelParams &p, double tol = 1e-12);

// Left-hand sides of the pair system at (a, b): {a-equation, b-equation}.
std::pair<double, double> pair_residuals(int k, double tau, double a, double b);

// Newton polish of (a, b) on the pair system; keeps the best iterate.
void polish_pair(int k, double tau, double &a, double &b);

// All positive solutions for any k >= 2: Q-roots as equal pairs plus
// U-roots paired through b = f(a). Unordered, deduplicated, residual checked.
std::vector<BoundaryLawPair> solve_generic(const ModelParams &p, double tol = 1e-12);

// k = 3 closed-form route: x = a+b from the quartic
// x^4 - tau x^3 + tau x + 2 = 0 (Ferrari), ab = x^2 + tau/(x - tau),
// then a,b as roots of t^2 - x t + ab. Returns unequal pairs only.
std::vector<BoundaryLawPair> solve_k3(double tau, double tol = 1e-12);

// Necessary condition for two pairs to induce the same gradient measure:
// equal sums or product of sums equal to 4.
bool possibly_equal_pairs(const BoundaryLawPair &p1, const BoundaryLawPair &p2,
                          double tol = 1e-9);

// Partition of solutions into classes under possibly_equal_pairs closure.
std::vector<std::vector<int>> identifiability_classes(
    const std::vector<BoundaryLawPair> &sols, double tol = 1e-9);

SolutionCount count_solutions_detail(const ModelParams &p, double tol = 1e-12);
int count_solutions(const ModelParams &p, double tol = 1e-12);

}  // namespace sosggm
