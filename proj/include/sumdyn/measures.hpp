#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumdyn/dynamics.hpp"

namespace sumdyn {

// Weighted empirical measure on a finite product of state spaces. Weights
// are uniform when the weight vector is empty.
struct PointCloudMeasure {
    int arity = 1;
    std::vector<StatePoint> tuples; // flattened, size = count * arity
    std::vector<double> weights;
    std::string provenance;

    std::size_t count() const { return tuples.size() / static_cast<std::size_t>(arity); }
    const StatePoint& at(std::size_t m, int coord) const {
        return tuples[m * static_cast<std::size_t>(arity) + static_cast<std::size_t>(coord)];
    }
    double weight(std::size_t m) const {
        return weights.empty() ? 1.0 / static_cast<double>(count()) : weights[m];
    }
    void check_weights() const; // sum to 1 within 1e-12 when explicit

    // Columnar text: one tuple per line, coordinates space-separated.
    void export_columns(const std::string& path) const;
};

// Orbit cloud {T^n z : n = 1..N} of the factor image of a under
// T x T^2 x ... x T^k, i.e. tuples (T^n z, T^{2n} z, ..., T^{kn} z).
PointCloudMeasure empirical_xi(const DynamicalSystem& sys, const StatePoint& a, int k,
                               std::size_t n_points);

enum class FiberLift { identity, uniform_fiber };

// sigma from xi: identity lift pins the first coordinate to a and reuses the
// xi tuples (sigma = delta_a (x) xi); the uniform fiber lift additionally
// attaches independent uniform fiber coordinates over the base factor
// (skew product over its base circle only).
PointCloudMeasure build_sigma(const DynamicalSystem& sys, const PointCloudMeasure& xi,
                              const StatePoint& a, FiberLift lift, std::uint64_t seed = 1);

// Comparison cloud {(a, T^n a, ..., T^{kn} a)}.
PointCloudMeasure naive_sigma(const DynamicalSystem& sys, const StatePoint& a, int k,
                              std::size_t n_points);

// (1/N) sum_n mean over the orbit cloud {T^j a : j<=cloud} of
// f0(x) f1(T^n x) ... fk(T^{kn} x).
std::complex<double> estimate_joining(const DynamicalSystem& sys, const StatePoint& a, int k,
                                      std::size_t n_avg, const std::vector<TrigPoly>& f,
                                      std::size_t cloud);

struct ProgressiveWitness {
    long long n = 0;
    double mass = 0.0;
    std::size_t sample_tuple = 0; // index of one tuple in the intersection
};

struct ProgressiveReport {
    bool vacuous = false;   // sigma(X x U_1 x ... x U_k) = 0
    double base_mass = 0.0; // sigma(X x U_1 x ... x U_k)
    std::vector<ProgressiveWitness> witnesses;
};

// Empirical mass of (X x U_1 x...x U_k) intersect T_Delta^{-n}(U_1 x...x U_k x X)
// for each n <= n_max; witnesses are the n with positive mass.
ProgressiveReport check_progressive(const DynamicalSystem& sys, const PointCloudMeasure& sigma,
                                    const std::vector<OpenRegion>& regions, long long n_max);

struct DominationReport {
    bool pass = false;
    int violations = 0;
    double worst_excess = 0.0; // max over cells of sigma_i - i*mu - slack
    nlohmann::json cells;      // per-coordinate summaries
};

// Lattice-cell check of sigma_i <= i * mu + slack, slack from 3-sigma
// binomial bounds on both empirical sides.
DominationReport check_marginal_domination(const DynamicalSystem& sys,
                                           const PointCloudMeasure& sigma,
                                           const PointCloudMeasure& mu_cloud, int resolution);

struct InvarianceReport {
    double max_cell_discrepancy = 0.0;
    int cells = 0;
};

// Cell-frequency comparison of the cloud against its image under
// (Id x T x T^2 x ... x T^k)^steps.
InvarianceReport check_sigma_invariance(const DynamicalSystem& sys,
                                        const PointCloudMeasure& sigma, int steps,
                                        int resolution);

struct DiagonalAverageReport {
    std::complex<double> lhs; // (1/N) sum_n integral of T_Delta^n (1 (x) g_1 ... g_k) d sigma
    std::complex<double> rhs; // joining estimate with f_0 = 1
    double diff = 0.0;
};

DiagonalAverageReport check_diagonal_average(const DynamicalSystem& sys, const StatePoint& a,
                                             int k, std::size_t n_avg,
                                             const std::vector<TrigPoly>& g, std::size_t cloud);

struct CoordinateInvarianceReport {
    double discrepancy = 0.0; // || u_N - v_N || in empirical L2(sigma)
    double u_norm = 0.0;
    double v_norm = 0.0;
};

// u_N = (1/N) sum_n T_Delta^n (G (x) 1), v_N = (1/N) sum_n T_Delta^n (1 (x) G),
// both evaluated on the sigma cloud; reports the L2(sigma) distance.
CoordinateInvarianceReport check_coordinate_invariance(const DynamicalSystem& sys,
                                                       const StatePoint& a, int k,
                                                       std::size_t n_avg, const TrigPoly& big_g,
                                                       std::size_t cloud);

struct CorrelationBoundReport {
    double lhs = 0.0; // |(1/N) sum_n g(T^n a) F(S^n y)|
    double rhs = 0.0; // ||E(g | factor)||_L1 * ||F||_inf
    double slack = 0.0;
    bool pass = false;
};

// factor_level selects the pronilfactor used for the conditional
// expectation; identity factors evaluate it exactly, strict factors use
// fiber binning over the base (flagged experimental in the docs).
CorrelationBoundReport check_correlation_orthogonality(
    const DynamicalSystem& sys, const StatePoint& a, const TrigPoly& g, int factor_level,
    const DynamicalSystem& y_sys, const StatePoint& y, const TrigPoly& big_f,
    std::size_t n_avg, int fiber_bins = 64, std::size_t cloud = 100'000, double slack = 0.05);

} // namespace sumdyn
