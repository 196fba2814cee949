#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "sumdyn/dynamics.hpp"

namespace sumdyn {

// Positive integer exponent vector for product transformations
// T_v = T^{v_1} x ... x T^{v_k}.
struct ExponentVector {
    std::vector<long long> entries;
    void validate() const;
    std::size_t size() const { return entries.size(); }
};

struct LcmReduction {
    long long c = 1;                 // lcm(v_1..v_k)
    ExponentVector w;                // w_i = c * u_i / v_i
};

// Exact integer reduction with the identity c * u_i = v_i * w_i.
LcmReduction lcm_reduction(const ExponentVector& u, const ExponentVector& v);

// Cloud on the invariant line H = {(x, 2x)} in the 2-torus of a circle
// rotation: equispaced base points, exact in distribution under T^a x T^b
// whenever b = 2a.
struct LineCloud {
    std::vector<double> x;  // base coordinates
    std::vector<double> y;  // y = frac(2x)
    double alpha = 0.0;
};
LineCloud make_line_cloud(double alpha, std::size_t count);

// Product of per-coordinate circle arcs [lo_i, hi_i) (no wrap).
struct ArcProduct {
    double lo1 = 0, hi1 = 1, lo2 = 0, hi2 = 1;
};

struct RecurrenceReport {
    bool invariance_ok = false;
    double invariance_discrepancy = 0.0;
    double set_mass = 0.0;              // empirical nu(A)
    double average = 0.0;               // (1/W) sum_n nu(A cap T_u^{-n} A)
    std::vector<long long> witnesses;   // n with positive intersection mass
    std::vector<double> dyadic_witness_density; // witness share per dyadic sub-window
};

// Average intersection mass of A with its T_u^{-n} preimages over n <= window,
// after re-verifying empirical T_v-invariance of the cloud (cell frequencies,
// slack 0.02) and nu(A) > 0.
RecurrenceReport check_recurrence_average(const LineCloud& cloud, const ExponentVector& u,
                                          const ExponentVector& v, const ArcProduct& arcs,
                                          long long window);

struct CounterexampleReport {
    double delta = 0.0;
    double min_orbit_gap = 0.0;     // min over 1<=n<=window of dist(3 n alpha, 0)
    long long window = 0;
    bool all_empty = false;         // every thickened intersection empty
    std::vector<long long> nonempty_n;
};

// The non-product-set demonstration: on the delta-thickening of H, the
// intersections H_delta cap T_u^{-n} H_delta with u = (2,1) are empty for
// every n <= window once delta is below half the minimal 3 n alpha gap.
CounterexampleReport counterexample_demo(double alpha, long long window, double delta,
                                         std::size_t cloud = 4096);

// Pointwise containment of the proof's inclusion: every cloud point lying in
// every T_v^{-w_i n} A also lies in T_u^{-c n} A. Returns the number of
// exceptions (always 0; exact integer exponent identity).
std::size_t containment_exceptions(const LineCloud& cloud, const ExponentVector& u,
                                   const ExponentVector& v, const ArcProduct& arcs,
                                   long long n);

} // namespace sumdyn
