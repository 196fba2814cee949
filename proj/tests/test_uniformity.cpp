#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <memory>

#include "sumdyn/numeric.hpp"
#include "sumdyn/rng.hpp"
#include "sumdyn/uniformity.hpp"

using namespace sumdyn;
using cplx = std::complex<double>;

namespace {

// independent 2^s-fold nested-mean evaluation of the box-norm power
cplx brute_power(const std::vector<cplx>& f, int s) {
    const std::size_t n = f.size();
    std::vector<std::size_t> h(static_cast<std::size_t>(s), 0);
    cplx total{0, 0};
    std::size_t combos = 1;
    for (int i = 0; i < s; ++i) combos *= n;
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t c = code;
        for (int i = 0; i < s; ++i) {
            h[static_cast<std::size_t>(i)] = c % n;
            c /= n;
        }
        for (std::size_t base = 0; base < n; ++base) {
            cplx prod{1, 0};
            for (std::size_t mask = 0; mask < (1u << s); ++mask) {
                std::size_t idx = base;
                int bits = 0;
                for (int i = 0; i < s; ++i)
                    if (mask & (1u << i)) {
                        idx += h[static_cast<std::size_t>(i)];
                        ++bits;
                    }
                cplx v = f[idx % n];
                prod *= (bits % 2 == 1) ? std::conj(v) : v;
            }
            total += prod;
        }
    }
    double scale = static_cast<double>(n);
    for (int i = 0; i < s; ++i) scale *= static_cast<double>(n);
    return total / scale;
}

double brute_norm(const std::vector<cplx>& f, int s) {
    cplx p = brute_power(f, s);
    if (s == 0) return std::abs(p);
    return std::pow(std::max(p.real(), 0.0), 1.0 / std::ldexp(1.0, s));
}

CyclicFunction random_function(Rng& rng, std::size_t n) {
    CyclicFunction f;
    for (std::size_t i = 0; i < n; ++i)
        f.values.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
    return f;
}

} // namespace

TEST_CASE("box norms of the constant function are 1") {
    CyclicFunction f;
    f.values.assign(17, {1.0, 0.0});
    for (int s = 0; s <= 3; ++s) CHECK(gowers_norm(f, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("characters: s = 1 vanishes, s = 2 saturates") {
    const std::size_t n = 32;
    for (long long a : {1LL, 5LL, 17LL}) {
        CyclicFunction f;
        for (std::size_t j = 0; j < n; ++j)
            f.values.push_back(unit_phase(static_cast<double>(a) * double(j) / double(n)));
        CHECK(gowers_norm(f, 1) <= 1e-12); // geometric sum vanishes exactly
        CHECK(gowers_norm(f, 2) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::fabs(gowers_norm(f, 2) - brute_norm(f.values, 2)) <= 1e-10);
    }
}

TEST_CASE("recursion agrees with the brute nested mean") {
    Rng rng(101);
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t n = 1 + rng.below(16);
        auto f = random_function(rng, n);
        for (int s = 0; s <= 3; ++s) {
            CHECK(std::fabs(gowers_norm(f, s) - brute_norm(f.values, s)) <= 1e-10);
        }
    }
}

TEST_CASE("box norms are monotone from s = 1") {
    Rng rng(55);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_function(rng, 12 + rng.below(12));
        double u1 = gowers_norm(f, 1);
        double u2 = gowers_norm(f, 2);
        double u3 = gowers_norm(f, 3);
        CHECK(u1 <= u2 + 1e-12);
        CHECK(u2 <= u3 + 1e-12);
    }
    CyclicFunction f;
    f.values.assign(4, {1.0, 0.0});
    CHECK_THROWS_AS(gowers_norm(f, 7), ArgumentError);
}

TEST_CASE("trajectory seminorms: constants and the ergodic identity") {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    TrajectoryObservable one{sys, {sys.make_point({0.2})}, TrigPoly::constant(1.0), 20000, 0};
    for (int s = 0; s <= 3; ++s)
        CHECK(seminorm_trajectory(one, s).value == doctest::Approx(1.0).epsilon(1e-10));

    // |mean| identity at s = 1 for an observable with a visible mean
    TrigPoly f;
    f.terms.push_back({0.3, {}});
    f.terms.push_back({1.0, {1}});
    TrajectoryObservable obs{sys, {sys.make_point({0.2})}, f, 100000, 0};
    auto u1 = seminorm_trajectory(obs, 1);
    auto mean = birkhoff_average(sys, sys.make_point({0.2}), f, {1, 100000});
    CHECK(u1.value == doctest::Approx(std::abs(mean)).epsilon(1e-12));
    CHECK(std::fabs(u1.value - 0.3) <= 0.01);
}

TEST_CASE("trajectory seminorms on the rotation character") {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    TrajectoryObservable obs{sys, {sys.make_point({0.2})}, TrigPoly::character({1}), 100000,
                             1000};
    CHECK(seminorm_trajectory(obs, 1).value <= 0.01);
    CHECK(std::fabs(seminorm_trajectory(obs, 2).value - 1.0) <= 0.05);
}

TEST_CASE("trajectory seminorms on the skew-product fiber character") {
    auto sys = DynamicalSystem::skew(golden_ratio_frac());
    TrajectoryObservable obs{sys, {sys.make_point({0.37, 0.11})}, TrigPoly::character({0, 1}),
                             100000, 1000};
    CHECK(seminorm_trajectory(obs, 2).value <= 0.1); // quadratic-phase cancellation
    TrajectoryObservable obs3{sys, {sys.make_point({0.37, 0.11})}, TrigPoly::character({0, 1}),
                              100000, 0};
    auto u3 = seminorm_trajectory(obs3, 3);
    CHECK(u3.value >= 0.9); // second derivatives are unimodular constants
    CHECK(u3.h_effective <= u3.n_avg);
}

TEST_CASE("averaging inequality: stated examples") {
    // opposite weights cancel
    std::vector<std::vector<cplx>> v = {{1.0}, {1.0}};
    auto rep = vdc_inequality(v, {cplx{1, 0}, cplx{-1, 0}});
    CHECK(rep.lhs == doctest::Approx(0.0));
    CHECK(rep.pass);

    // orthonormal family: closed forms 1/n vs 1/sqrt(n)
    const std::size_t n = 8;
    std::vector<std::vector<cplx>> basis(n, std::vector<cplx>(n, {0, 0}));
    for (std::size_t i = 0; i < n; ++i) basis[i][i] = std::sqrt(double(n));
    std::vector<cplx> ones(n, {1, 0});
    auto rep2 = vdc_inequality(basis, ones);
    CHECK(rep2.lhs == doctest::Approx(1.0 / double(n)).epsilon(1e-12));
    CHECK(rep2.rhs == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-12));
    CHECK(rep2.pass);

    CHECK_THROWS_AS(vdc_inequality({{1.0}, {1.0, 2.0}}, ones), ArgumentError);
}

TEST_CASE("averaging inequality: random instances always pass") {
    Rng rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 1 + rng.below(8);
        std::size_t dim = 1 + rng.below(8);
        std::vector<std::vector<cplx>> v(n, std::vector<cplx>(dim));
        std::vector<cplx> b(n);
        for (auto& vec : v)
            for (auto& x : vec) x = {rng.gaussian(), rng.gaussian()};
        for (auto& x : b) x = {rng.gaussian(), rng.gaussian()};
        auto rep = vdc_inequality(v, b);
        CHECK(rep.lhs <= rep.rhs + 1e-12);
    }
}

TEST_CASE("residue splitting of window averages") {
    std::vector<cplx> constant(1000, {0.7, -0.2});
    auto rep = folner_split(constant, 4);
    CHECK(rep.lhs == doctest::Approx(std::abs(cplx{0.7, -0.2})).epsilon(1e-12));
    CHECK(rep.rhs == doctest::Approx(std::abs(cplx{0.7, -0.2})).epsilon(1e-12));
    CHECK(rep.pass);

    std::vector<cplx> alt(30000);
    for (std::size_t i = 0; i < alt.size(); ++i)
        alt[i] = {(i % 2 == 0) ? 1.0 : -1.0, 0.0};
    auto rep2 = folner_split(alt, 2);
    CHECK(rep2.lhs <= 1e-4);
    CHECK(rep2.rhs == doctest::Approx(1.0).epsilon(1e-12)); // strict inequality here

    Rng rng(3);
    std::vector<cplx> rnd(30000);
    for (auto& x : rnd) x = {rng.below(2) ? 1.0 : -1.0, 0.0};
    auto rep3 = folner_split(rnd, 3);
    CHECK(rep3.slack <= 1e-3);
    CHECK(rep3.pass);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<cplx> seq(500 + rng.below(2000));
        for (auto& x : seq) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        int c = 1 + static_cast<int>(rng.below(6));
        CHECK(folner_split(seq, c).pass);
    }
}

TEST_CASE("rescaling comparison between T and its powers") {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    auto start = sys.make_point({0.2});

    auto one = check_power_rescaling(sys, start, TrigPoly::constant(1.0), 2, 2, 20000, 64);
    CHECK(one.norm_t == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(one.norm_tc == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(one.pass_lower);
    CHECK(one.pass_upper);

    auto ch = check_power_rescaling(sys, start, TrigPoly::character({1}), 2, 2, 50000, 200);
    // both norms equal 1 for a character (derivatives are constants)
    CHECK(std::fabs(ch.norm_t - 1.0) <= 0.02);
    CHECK(std::fabs(ch.norm_tc - 1.0) <= 0.02);
    CHECK(ch.pass_lower);
    CHECK(ch.pass_upper);

    auto skew = DynamicalSystem::skew(golden_ratio_frac());
    auto fib = check_power_rescaling(skew, skew.make_point({0.37, 0.11}),
                                     TrigPoly::character({0, 1}), 3, 2, 40000, 0, 0.1);
    CHECK(fib.pass_lower);
    CHECK(fib.pass_upper);
}

TEST_CASE("product-pair seminorms stay below the squared next level") {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    auto start = sys.make_point({0.2});

    auto one = check_product_bound(sys, start, TrigPoly::constant(1.0), 1, 20000, 64);
    CHECK(one.lhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(one.rhs == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(one.pass);

    auto ch = check_product_bound(sys, start, TrigPoly::character({1}), 1, 30000, 100);
    CHECK(ch.pass);

    // random-phase observable at k = 2
    auto signs = std::make_shared<std::vector<cplx>>();
    Rng rng(21);
    for (int i = 0; i < 64; ++i) signs->push_back(unit_phase(rng.uniform01()));
    GenericObservable f = [signs](const StatePoint& p) {
        int b = std::min(63, static_cast<int>(p.coords[0] * 64));
        return (*signs)[static_cast<std::size_t>(b)];
    };
    auto rnd = check_product_bound(sys, start, f, 2, 20000, 48);
    CHECK(rnd.pass);
}

TEST_CASE("multi-term averages decay when a factor is uniform") {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());

    std::vector<Observable> ones = {Observable{TrigPoly::constant(1.0)},
                                    Observable{TrigPoly::constant(1.0)}};
    auto rep = multilinear_uniformity_decay(sys, ones, {1, 2}, 10000, 16);
    for (double v : rep.l2_values) CHECK(v == doctest::Approx(1.0).epsilon(1e-9));

    std::vector<Observable> zm = {Observable{TrigPoly::character({1})},
                                  Observable{TrigPoly::constant(1.0)}};
    auto rep2 = multilinear_uniformity_decay(sys, zm, {1, 2}, 100000, 16);
    CHECK(rep2.l2_values.back() <= 0.02);

    // random unimodular bins: empirically small box norm, small average
    auto signs = std::make_shared<std::vector<double>>();
    Rng rng(9);
    for (int i = 0; i < 64; ++i) signs->push_back(rng.below(2) ? 1.0 : -1.0);
    GenericObservable f = [signs](const StatePoint& p) {
        int b = std::min(63, static_cast<int>(p.coords[0] * 64));
        return cplx{(*signs)[static_cast<std::size_t>(b)], 0.0};
    };
    std::vector<Observable> rnd = {Observable{f}, Observable{f}};
    auto rep3 = multilinear_uniformity_decay(sys, rnd, {1, 2}, 100000, 16);
    CHECK(rep3.l2_values.back() <= 0.1);
}
