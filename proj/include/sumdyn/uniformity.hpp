#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sumdyn/dynamics.hpp"

namespace sumdyn {

// Finite model for a bounded observable: N complex values on Z/N.
struct CyclicFunction {
    std::vector<std::complex<double>> values;

    std::size_t size() const { return values.size(); }
    double sup_norm() const;
};

// Box norm on the cyclic group, computed by the multiplicative-derivative
// recursion; s = 0 reports |mean|. Cost grows like N^s.
double gowers_norm(const CyclicFunction& f, int s);
// The 2^s-th power before the final root (complex at s = 0, essentially
// real and nonnegative for s >= 1).
std::complex<double> gowers_power(const CyclicFunction& f, int s);

// Observable sampled along orbits: base system, start point(s), the
// observable, an averaging length N, and an h-budget H for the outer
// derivative averages. Extra starts turn the base average into a cloud mean
// (used for product-system checks).
struct TrajectoryObservable {
    DynamicalSystem sys;
    std::vector<StatePoint> starts; // at least one
    Observable f;
    long long n_avg = 100'000;
    long long h_budget = 0; // 0: default floor(sqrt(N))
};

struct SeminormResult {
    double value = 0.0;
    int s = 0;
    long long n_avg = 0;
    long long h_requested = 0;
    long long h_effective = 0; // capped so the nested cost stays bounded
};

// Truncated orbit seminorm: derivative levels average over h <= H_eff, the
// base level is |Birkhoff mean| over N (the ergodic-case identity for the
// first level; the shipped systems are uniquely ergodic). s <= 4.
SeminormResult seminorm_trajectory(const TrajectoryObservable& obs, int s);

// Same recursion on explicit sample arrays (one per start).
SeminormResult seminorm_samples(const std::vector<std::vector<std::complex<double>>>& samples,
                                long long n_avg, long long h_budget, int s);

struct VdcReport {
    double lhs = 0.0;  // ||(1/n) sum b_i v_i||^2 in L2 of the uniform measure
    double rhs = 0.0;  // ||b||_inf^2 * ||(1/n) sum v_i (x) conj(v_i)||_L2(tau x tau)
    bool pass = false; // lhs <= rhs + 1e-12
};

// The finite averaging inequality, implemented verbatim with the uniform
// measure on coordinates.
VdcReport vdc_inequality(const std::vector<std::vector<std::complex<double>>>& vectors,
                         const std::vector<std::complex<double>>& weights);

struct FolnerSplitReport {
    double lhs = 0.0;    // |avg over the window|
    double rhs = 0.0;    // (1/c) sum_j |avg over the residue subsequence|
    double slack = 0.0;  // edge term O(c/|window|)
    bool pass = false;
};

// Residue-class splitting of a window average; values indexed by the window.
FolnerSplitReport folner_split(const std::vector<std::complex<double>>& values, int c);

struct RescalingReport {
    double norm_t = 0.0;   // ||f||_{U^k} along T
    double norm_tc = 0.0;  // ||f||_{U^k} along T^c
    double bound = 0.0;    // c^{k/2^k} * norm_t
    bool pass_lower = false; // norm_t <= norm_tc + slack
    bool pass_upper = false; // norm_tc <= bound + slack (k >= 2)
};

RescalingReport check_power_rescaling(const DynamicalSystem& sys, const StatePoint& start,
                                      const Observable& f, int k, int c, long long n_avg,
                                      long long h_budget, double slack = 0.05);

struct ProductBoundReport {
    double lhs = 0.0; // ||f (x) conj f||_{U^k} on diagonal pair trajectories
    double rhs = 0.0; // ||f||_{U^{k+1}}^2
    bool pass = false;
};

ProductBoundReport check_product_bound(const DynamicalSystem& sys, const StatePoint& start,
                                       const Observable& f, int k, long long n_avg,
                                       long long h_budget, int pair_count = 16,
                                       std::uint64_t seed = 5, double slack = 0.05);

struct DecayReport {
    std::vector<long long> lengths;
    std::vector<double> l2_values; // ||(1/N') sum_n prod_i T^{c_i n} f_i||_{L2(cloud)}
    double min_seminorm = 0.0;     // min_i ||f_i||_{U^k} at the same budgets
};

// Multi-term average decay over a cloud of start points; qualitative only,
// no constants asserted.
DecayReport multilinear_uniformity_decay(const DynamicalSystem& sys,
                                         const std::vector<Observable>& f,
                                         const std::vector<int>& exponents, long long n_avg,
                                         int cloud, std::uint64_t seed = 11);

} // namespace sumdyn
