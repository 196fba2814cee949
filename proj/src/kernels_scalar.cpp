#include "sumdyn/kernels.hpp"

#include <cmath>

#include "sumdyn/numeric.hpp"

namespace sumdyn::kern::detail {

cplx exact_phase(long long j, double p0, double p1, double p2) {
    double turns = frac_unit(frac_unit(p0) + frac_mul(j, p1) + frac_mul(j * j, p2));
    return unit_phase(turns);
}

cplx sum_scalar(const cplx* a, std::size_t n) {
    KahanComplex acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(a[i]);
    return acc.sum;
}

cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n) {
    KahanComplex acc;
    for (std::size_t i = 0; i < n; ++i) acc.add(a[i] * std::conj(b[i]));
    return acc.sum;
}

void mul_conj_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

double l2_diff_scalar(const cplx* a, const cplx* b, std::size_t n) {
    KahanReal acc;
    for (std::size_t i = 0; i < n; ++i) {
        double dr = a[i].real() - b[i].real();
        double di = a[i].imag() - b[i].imag();
        acc.add(dr * dr + di * di);
    }
    return acc.sum;
}

std::size_t arc_count_scalar(const double* x, std::size_t n, double lo, double hi) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i) c += (x[i] >= lo && x[i] < hi) ? 1 : 0;
    return c;
}

namespace {
constexpr std::size_t kAnchorStride = 256;
}

void phase_fill_scalar(cplx* out, std::size_t n, double p0, double p1, double p2, long long n0) {
    cplx twist = unit_phase(2.0 * frac_unit(p2));
    // step between consecutive phases: p1 + (2j+1) p2; its own step is 2 p2
    for (std::size_t base = 0; base < n; base += kAnchorStride) {
        long long j = n0 + static_cast<long long>(base);
        cplx w = exact_phase(j, p0, p1, p2);
        double step_turns = frac_unit(frac_unit(p1) + frac_mul(2 * j + 1, p2));
        cplx s = unit_phase(step_turns);
        std::size_t stop = base + kAnchorStride < n ? base + kAnchorStride : n;
        for (std::size_t i = base; i < stop; ++i) {
            out[i] = w;
            w *= s;
            s *= twist;
        }
    }
}

cplx phase_sum_scalar(std::size_t n, double p0, double p1, double p2, long long n0) {
    cplx twist = unit_phase(2.0 * frac_unit(p2));
    KahanComplex acc;
    for (std::size_t base = 0; base < n; base += kAnchorStride) {
        long long j = n0 + static_cast<long long>(base);
        cplx w = exact_phase(j, p0, p1, p2);
        double step_turns = frac_unit(frac_unit(p1) + frac_mul(2 * j + 1, p2));
        cplx s = unit_phase(step_turns);
        std::size_t stop = base + kAnchorStride < n ? base + kAnchorStride : n;
        for (std::size_t i = base; i < stop; ++i) {
            acc.add(w);
            w *= s;
            s *= twist;
        }
    }
    return acc.sum;
}

} // namespace sumdyn::kern::detail
