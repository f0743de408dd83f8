#pragma once

#include <array>
#include <functional>
#include <vector>

#include "external_field.hpp"

namespace sosggm {

inline int T4(long long i) { return static_cast<int>(((i % 4) + 4) % 4); }

// Rooted ball of radius R in the Cayley tree of branching k. Vertex 0 is the
// root (degree k+1); inner vertices have k children. Lambda is the ball of
// radius R-1, its outer boundary is the depth-R sphere.
struct TreeWindow {
    int k = 2;
    int R = 1;
    std::vector<int> parent;                   // -1 for the root
    std::vector<int> depth;
    std::vector<std::vector<int>> children;
    std::vector<std::pair<int, int>> edges;    // (parent, child); edge e ends at vertex e+1
    std::vector<int> interior;                 // depth < R
    std::vector<int> boundary;                 // depth == R
    std::vector<std::vector<int>> path_edges;  // edge indices on the root-to-v path

    int n_vertices() const { return static_cast<int>(parent.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
};

TreeWindow build_window(int k, int R);

// Edge weight of the gradient specification.
struct TransferOperator {
    double theta = 0.5;
    double operator()(long long dz) const;
    double total_mass() const { return (1.0 + theta) / (1.0 - theta); }
};

// 4-periodic boundary law by residue class: u = (1, b, 1, a) with a at
// residue 3 and b at residue 1; z_i = h(i) u_i^k; h = (1, h2, 1, h1).
struct PeriodicBoundaryLaw {
    int k = 2;
    double tau = 0.0;
    double theta = 0.0;
    std::array<double, 4> u{1, 1, 1, 1};
    std::array<double, 4> z{1, 1, 1, 1};
    std::array<double, 4> h{1, 1, 1, 1};
    bool has_field = false;
};

PeriodicBoundaryLaw boundary_law_from_pair(const BoundaryLawPair &pair);
PeriodicBoundaryLaw boundary_law_from_field(const FieldSolution &sol);

// law with all residue tables rotated by r: z'(i) = z(i + r)
PeriodicBoundaryLaw shift_law(const PeriodicBoundaryLaw &law, int r);

// (Kz)(i) = sum_j theta^{|i-j|} z_j over the full lattice, per residue class,
// in closed form through 4-term geometric blocks.
std::array<double, 4> kz_values(const PeriodicBoundaryLaw &law);

// Geometric tails l_i = sum_{j <= -1} theta^{|i-j|} z_j and
// r_i = sum_{j >= 1} theta^{|i-j|} z_j at the representatives i = 0..3.
struct SeriesSums {
    std::array<double, 4> l{};
    std::array<double, 4> r{};
};
SeriesSums series_sums(const PeriodicBoundaryLaw &law);

// Max residual over residues of the fixed point property, computed two
// independent ways: the three-term ratio form and the full series form.
// Throws domain_error when u(-1) + u(1) - tau is within tol of zero.
double check_consistency(const PeriodicBoundaryLaw &law, double tol = 1e-9);

struct ProbeResult {
    bool divergent = false;
    double slope = 0.0;             // measured growth of the partial sums per term
    double closed_form_slope = 0.0; // per-residue average of (Kz)_i^{k+1} (periodic laws)
    double last_partial = 0.0;
    int depth = 0;
    const char *verdict() const { return divergent ? "divergent" : "convergent-so-far"; }
};

// Partial sums of sum_i (Kz)(i)^{k+1} over i in [-depth, depth].
ProbeResult normalisability_probe(const PeriodicBoundaryLaw &law, int depth);
// Same probe for an arbitrary profile z(i) (test fixtures); the inner sum is
// truncated where theta^{|.|} underflows.
ProbeResult normalisability_probe_fn(const std::function<double(long long)> &z, double theta,
                                     int k, int depth);

// P(i -> j) = z(T4(j)) theta^{|j-i|} / (Kz)(T4(i)), exact lattice
// normalization, reported on the window [-M, M]^2.
struct TransitionKernel {
    int M = 0;
    double theta = 0.0;
    std::vector<std::vector<double>> rows;  // rows[i+M][j+M]
    std::vector<double> row_tail_mass;      // mass outside the window per row
};
TransitionKernel transition_kernel(const PeriodicBoundaryLaw &law, int M);

// Exact probability table of a gradient measure on the window's edges with
// per-edge truncation to [-M, M].
struct GradientMeasureTable {
    int k = 2;
    int R = 1;
    int M = 0;
    int pin = 0;  // residue 0..3, or -1 for the mixed table
    std::vector<std::pair<std::vector<int>, double>> entries;
    double Z = 0.0;
};

double default_budget();  // SOS_GGM_BUDGET env override, else 5e7 configurations

GradientMeasureTable pinned_measure(const PeriodicBoundaryLaw &law, const TreeWindow &w, int s,
                                    int M, double budget = -1.0);
GradientMeasureTable mixed_measure(const PeriodicBoundaryLaw &law, const TreeWindow &w, int M,
                                   double budget = -1.0);

// Per-edge root-edge marginals: the R=1 pinned table is a product measure
// with p(dz) proportional to theta^{|dz|} z(T4(s+dz)); the R=2 table
// marginalizes branch-by-branch to q(dz) proportional to
// theta^{|dz|} h(c) K_M(c)^k at c = T4(s+dz).
std::vector<double> r1_edge_table(const PeriodicBoundaryLaw &law, int s, int M);
std::vector<double> r2_edge_table(const PeriodicBoundaryLaw &law, int s, int M);

// Sup-norm gap between the R=2 marginal and the R=1 table over the full
// joint support (k+1 root edges), without materializing either table.
double marginal_consistency_error(const PeriodicBoundaryLaw &law, int s, int M);

enum class IdentVerdict { possibly_equal, distinct };
IdentVerdict identifiability_check(const BoundaryLawPair &p1, const BoundaryLawPair &p2,
                                   double tol = 1e-9);

}  // namespace sosggm
