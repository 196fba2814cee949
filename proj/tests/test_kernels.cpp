#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "sumdyn/kernels.hpp"
#include "sumdyn/numeric.hpp"
#include "sumdyn/rng.hpp"

using namespace sumdyn;
using kern::cplx;

namespace {

std::vector<cplx> random_values(Rng& rng, std::size_t n) {
    std::vector<cplx> v(n);
    for (auto& x : v) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    return v;
}

// plain unfused reference loop, the oracle for both backends
cplx naive_sum(const std::vector<cplx>& a) {
    cplx s{0, 0};
    for (auto v : a) s += v;
    return s;
}

struct BackendGuard {
    kern::Backend saved = kern::active_backend();
    ~BackendGuard() { kern::force_backend(saved); }
};

} // namespace

TEST_CASE("scalar kernels match naive reference loops") {
    BackendGuard guard;
    kern::force_backend(kern::Backend::scalar);
    Rng rng(42);
    for (std::size_t n : {0u, 1u, 7u, 64u, 1000u}) {
        auto a = random_values(rng, n);
        auto b = random_values(rng, n);
        CHECK(std::abs(kern::sum(a.data(), n) - naive_sum(a)) <= 1e-12 * (1.0 + double(n)));
        cplx dot{0, 0};
        for (std::size_t i = 0; i < n; ++i) dot += a[i] * std::conj(b[i]);
        CHECK(std::abs(kern::dot_conj(a.data(), b.data(), n) - dot) <=
              1e-12 * (1.0 + double(n)));
        std::vector<cplx> out(n);
        kern::mul_conj(a.data(), b.data(), out.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(out[i] - a[i] * std::conj(b[i])) <= 1e-15);
        double l2 = 0;
        for (std::size_t i = 0; i < n; ++i) l2 += std::norm(a[i] - b[i]);
        CHECK(kern::l2_diff(a.data(), b.data(), n) == doctest::Approx(l2).epsilon(1e-12));
    }
}

TEST_CASE("avx2 kernels agree with the scalar reference") {
    if (!kern::avx2_supported()) {
        MESSAGE("AVX2 not available; dispatch stays scalar");
        return;
    }
    BackendGuard guard;
    Rng rng(7);
    for (std::size_t n : {1u, 5u, 8u, 123u, 100000u}) {
        auto a = random_values(rng, n);
        auto b = random_values(rng, n);

        kern::force_backend(kern::Backend::scalar);
        cplx s_sum = kern::sum(a.data(), n);
        cplx s_dot = kern::dot_conj(a.data(), b.data(), n);
        double s_l2 = kern::l2_diff(a.data(), b.data(), n);
        std::vector<cplx> s_mul(n);
        kern::mul_conj(a.data(), b.data(), s_mul.data(), n);

        kern::force_backend(kern::Backend::avx2);
        CHECK(std::abs(kern::sum(a.data(), n) - s_sum) <= 1e-11 * (1.0 + double(n)));
        CHECK(std::abs(kern::dot_conj(a.data(), b.data(), n) - s_dot) <=
              1e-11 * (1.0 + double(n)));
        CHECK(kern::l2_diff(a.data(), b.data(), n) ==
              doctest::Approx(s_l2).epsilon(1e-11));
        std::vector<cplx> v_mul(n);
        kern::mul_conj(a.data(), b.data(), v_mul.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(v_mul[i] - s_mul[i]) <= 1e-14);
    }
}

TEST_CASE("arc counting agrees across backends and with a plain loop") {
    Rng rng(3);
    std::vector<double> x(20000);
    for (auto& v : x) v = rng.uniform01();
    double lo = 0.2, hi = 0.55;
    std::size_t naive = 0;
    for (double v : x) naive += (v >= lo && v < hi) ? 1 : 0;

    BackendGuard guard;
    kern::force_backend(kern::Backend::scalar);
    CHECK(kern::arc_count(x.data(), x.size(), lo, hi) == naive);
    if (kern::avx2_supported()) {
        kern::force_backend(kern::Backend::avx2);
        CHECK(kern::arc_count(x.data(), x.size(), lo, hi) == naive);
    }
}

TEST_CASE("phase streams track the exactly reduced phases") {
    BackendGuard guard;
    struct Case {
        double p0, p1, p2;
    };
    // linear and quadratic phases, irrational and near-rational steps
    std::vector<Case> cases = {{0.0, golden_ratio_frac(), 0.0},
                               {0.37, 0.1234567, 0.0},
                               {0.0, golden_ratio_frac(), golden_ratio_frac()},
                               {0.91, 0.0001, 0.707106781186547}};
    const std::size_t n = 100000;
    for (auto backend : {kern::Backend::scalar, kern::Backend::avx2}) {
        if (backend == kern::Backend::avx2 && !kern::avx2_supported()) continue;
        kern::force_backend(backend);
        for (const auto& c : cases) {
            std::vector<cplx> out(n);
            kern::phase_fill(out.data(), n, c.p0, c.p1, c.p2, 1);
            double worst = 0;
            for (std::size_t j = 0; j < n; j += 97) {
                cplx exact = kern::detail::exact_phase(1 + static_cast<long long>(j), c.p0,
                                                       c.p1, c.p2);
                worst = std::max(worst, std::abs(out[j] - exact));
            }
            CHECK(worst <= 1e-11);
            // the fused sum matches summing the filled buffer
            cplx filled_sum = kern::detail::sum_scalar(out.data(), n);
            cplx fused = kern::phase_sum(n, c.p0, c.p1, c.p2, 1);
            CHECK(std::abs(fused - filled_sum) <= 1e-9 * double(n));
        }
    }
}

TEST_CASE("linear phase sums match the geometric closed form") {
    BackendGuard guard;
    const std::size_t n = 50000;
    double alpha = golden_ratio_frac();
    for (auto backend : {kern::Backend::scalar, kern::Backend::avx2}) {
        if (backend == kern::Backend::avx2 && !kern::avx2_supported()) continue;
        kern::force_backend(backend);
        cplx got = kern::phase_sum(n, 0.25, alpha, 0.0, 1);
        // geometric series in long double
        std::complex<long double> q = std::polar<long double>(1.0L, 2.0L * 3.14159265358979323846L * (long double)alpha);
        std::complex<long double> w =
            std::polar<long double>(1.0L, 2.0L * 3.14159265358979323846L * (0.25L + (long double)alpha));
        std::complex<long double> s{0.0L, 0.0L};
        std::complex<long double> cur = w;
        // direct long-double evaluation with periodic renormalization
        for (std::size_t j = 0; j < n; ++j) {
            s += cur;
            cur *= q;
        }
        CHECK(std::abs(got - cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()))) <=
              1e-7 * double(n));
    }
}

TEST_CASE("backend name reports the active dispatch") {
    CHECK((kern::backend_name() == "avx2" || kern::backend_name() == "scalar"));
    if (kern::avx2_supported()) {
        BackendGuard guard;
        kern::force_backend(kern::Backend::avx2);
        CHECK(kern::backend_name() == "avx2");
        kern::force_backend(kern::Backend::scalar);
        CHECK(kern::backend_name() == "scalar");
    }
}
