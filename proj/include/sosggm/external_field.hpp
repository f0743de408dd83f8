#pragma once

#include <string>
#include <vector>

#include "boundary_law.hpp"

namespace sosggm {

// 4-periodic external field: h(4m) = h(4m+2) = 1, h(4m+1) = h2, h(4m-1) = h1.
struct FieldParams {
    ModelParams base;
    double h1 = 1.0;
    double h2 = 1.0;
    bool exact = false;
    rat h1_q = rat(1);
    rat h2_q = rat(1);

    FieldParams() = default;
    FieldParams(const ModelParams &base_, double h1_, double h2_);
    FieldParams(const ModelParams &base_, const rat &h1_, const rat &h2_);

    // field value by residue class of the height
    double h_residue(int r) const;
};

enum class FieldBranch { equal, sum_plus, sum_minus, other };

struct FieldSolution {
    FieldParams params;
    double a = 0.0;
    double b = 0.0;
    FieldBranch branch = FieldBranch::equal;
    int index = 0;  // 1..3 cubic roots, 4..5 plus branch, 6..7 minus branch
    double residual_a = 0.0;
    double residual_b = 0.0;
};

const char *branch_name(FieldBranch b);

// Left-hand sides of the field system at (a, b):
//   (a + b - tau) h1 a^k + tau a - 2  and  (a + b - tau) h2 b^k + tau b - 2.
std::pair<double, double> residuals_abd(const FieldParams &fp, double a, double b);

// Region membership for the uniform-field k = 2 analysis:
//   A: h >= tau^3/(8(tau^2-8)) when 2*sqrt(2) < tau < 4, h >= 4/tau when tau >= 4
//   B: tau >= 4 and 4/tau <= h <= tau^3/(8(tau^2-8)).
struct RegionTag {
    bool in_A = false;
    bool in_B = false;
    std::string value;  // "A", "B", "both-boundary", "neither"
};
RegionTag classify_region(double tau, double h);
RegionTag classify_region(const rat &tau, const rat &h);

// Complete closed-form solver for k = 2, h1 = h2 = h: cubic branch
// 2h a^3 - h tau a^2 + tau a - 2 = 0 plus the two sum branches
// a + b = (h tau +/- sqrt(h tau (h tau - 4)))/(2h) gated by regions A/B.
// Ordered solutions; up to seven.
std::vector<FieldSolution> solve_k2_uniform(double tau, double h, double tol = 1e-12);

// Deduplicated candidate list with sequential indices.
std::vector<FieldSolution> enumerate_measure_candidates(double tau, double h,
                                                        double tol = 1e-12);

// Damped-Newton multistart for general k or h1 != h2: 50 deterministic
// starts on (0, tau)^2. Ordered output sorted by (a, b), deduplicated.
std::vector<FieldSolution> solve_field_generic(const FieldParams &fp, double tol = 1e-12);

}  // namespace sosggm
