// Phase diagram scans: solution counts along tau, (tau, h) grids for k = 2,
// bisection refinement of transition points.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sosggm/boundary_law.hpp"

namespace sosggm {

struct PhasePoint {
    double tau = 0.0;
    double h = 1.0;      // uniform field value; 1 for zero-field scans
    bool has_h = false;  // true for (tau, h) grid points
    int k = 2;
    int n_equal = 0;
    int n_unequal = 0;
    int n_total = 0;
    int n_ggm_upper = 0;
    std::string region;  // field grids only, "" otherwise
};

struct Transition {
    double tau_star = 0.0;
    int count_left = 0;
    int count_right = 0;
};

struct ScanResult {
    std::vector<PhasePoint> points;
    std::vector<Transition> transitions;
    std::vector<double> exceptional;  // isolated special tau values inside the range
    int max_candidates = 0;
};

// Sample counts at tau_i = lo + (i+1)(hi-lo)/steps, i = 0..steps-1, refine
// every change of the headline count to 1e-6 and record known isolated
// special values of the sampled range.
ScanResult scan_tau(int k, double tau_lo, double tau_hi, int steps);

// k = 2 uniform-field grid; counts follow the ordered candidate convention
// (at most 7 per point) and each point carries its region tag.
ScanResult scan_tau_h(int k, double tau_lo, double tau_hi, int tau_steps, double h_lo,
                      double h_hi, int h_steps);

// Bisect [lo, hi] for the headline-count jump; requires differing endpoint
// counts. Interval is shrunk below tol (default 1e-6).
Transition refine_transition(int k, double tau_lo, double tau_hi, double tol = 1e-6);

// CSV with columns tau[,h],k,n_equal,n_unequal,n_total,n_ggm_upper,region.
void write_csv(std::ostream &os, const ScanResult &sr);

}  // namespace sosggm
