#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "sumdyn/dynamics.hpp"

namespace sumdyn {

// A tuple (x_0,...,x_k) together with a strictly increasing witness sequence
// c and the achieved per-witness deviations (nonincreasing in recorded order):
// d(T^{c(n)} x_{i-1}, x_i) <= deviation[n] for all i.
struct ErdosProgression {
    std::vector<StatePoint> points;     // size k+1, points[0] = x_0
    std::vector<long long> witnesses;   // c(1..W)
    std::vector<double> deviations;     // per witness, nonincreasing

    int k() const { return static_cast<int>(points.size()) - 1; }
    nlohmann::json to_json(const DynamicalSystem& sys) const;
};

struct ProgressionCheck {
    bool pass = false;
    int passing_witnesses = 0;
    std::vector<double> witness_deviation; // worst deviation per witness
};

// Checks d(T^{c(n)} x_{i-1}, x_i) < tol for every i and counts witnesses;
// pass when at least min_witnesses qualify.
ProgressionCheck verify_progression(const DynamicalSystem& sys, const ErdosProgression& prog,
                                    double tol, int min_witnesses);

// Circle-rotation oracle: x_i = a + i*beta, witnesses n with frac(n*alpha)
// within tol of beta. Irrationality of alpha is asserted by requiring a long
// continued-fraction expansion.
ErdosProgression rotation_progression(const DynamicalSystem& sys, const StatePoint& a,
                                      double beta, int k, int n_witness, double tol,
                                      long long scan_budget = 20'000'000);

struct ProgressionParams {
    double r0 = 0.1;
    double shrink = 0.5;             // radius factor per stage, at most 1/2
    double tol = 1e-3;               // target final tolerance
    int min_witnesses = 3;
    long long locate_budget = 2'000'000;  // scan steps for the nested stage
    long long witness_budget = 4'000'000; // scan steps for final witnesses
    long long seed_scan = 200'000;        // orbit-tuple seed search
    std::optional<std::vector<OpenRegion>> targets; // optional U_1..U_k containing x_j
    std::optional<std::vector<StatePoint>> seeds;   // optional explicit x_1..x_k
};

struct ProgressionSearch {
    std::optional<ErdosProgression> progression;
    int stages = 0;
    double final_radius = 0.0;
    bool budget_exhausted = false;
};

// Nested-ball greedy: repeatedly scans forward for a time c carrying the
// whole current tuple into the current balls, recenters at the observed
// image points, and halves the radius; witnesses are then certified by a
// fresh scan against the frozen final tuple, which keeps the recorded
// deviations honest on non-isometric systems.
ProgressionSearch find_progression(const DynamicalSystem& sys, const StatePoint& a, int k,
                                   const ProgressionParams& params);

struct ExtractResult {
    std::vector<long long> b;
    bool complete = false;
    nlohmann::json transcript; // per-step regions, witnesses, margins
};

// The greedy region-intersection extraction: step i picks b(i) = c(n_i) with
// T^{b(i)} x_{j-1} in U_{j,i-1} for every j, then updates
// U_{j,i} = U_{j,i-1} intersect T^{-b(i)} U_{j+1,i-1}, with U_{k,i} = U_k.
// Witnesses come from the progression first, then from a continuation scan.
ExtractResult extract_sumset(const DynamicalSystem& sys, const ErdosProgression& prog,
                             const std::vector<OpenRegion>& regions, int m_steps,
                             long long scan_budget = 4'000'000);

struct InclusionReport {
    bool pass = false;
    std::uint64_t subsets_checked = 0;
    std::vector<std::vector<long long>> failures; // failing index subsets (b values)
};

// For every subset {i_1<...<i_m} with m <= k, checks
// T^{b(i_1)+...+b(i_m)} x_0 in U_m. Exhaustive; capped at 1e6 subsets.
InclusionReport verify_sumset_inclusion(const DynamicalSystem& sys, const StatePoint& x0,
                                        const std::vector<long long>& b,
                                        const std::vector<OpenRegion>& regions, int k);

} // namespace sumdyn
