// AVX2 variants of the inner-loop kernels. This translation unit is the only
// one compiled with -mavx2; callers reach it through the runtime dispatch in
// kernels.cpp, which checks CPU support first.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cmath>

#include "sumdyn/kernels.hpp"
#include "sumdyn/numeric.hpp"

namespace sumdyn::kern::detail {

namespace {

// Horizontal sum of 4 doubles, lane order fixed (lane0+lane1)+(lane2+lane3).
inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

} // namespace

cplx sum_avx2(const cplx* a, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(a);
    // Kahan per SIMD lane; lanes are merged in fixed order at the end.
    __m256d s0 = _mm256_setzero_pd(), c0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd(), c1 = _mm256_setzero_pd();
    std::size_t pairs = n / 4; // 4 complexes = 8 doubles per iteration
    for (std::size_t i = 0; i < pairs; ++i) {
        __m256d v0 = _mm256_loadu_pd(p + 8 * i);
        __m256d v1 = _mm256_loadu_pd(p + 8 * i + 4);
        __m256d y0 = _mm256_sub_pd(v0, c0);
        __m256d t0 = _mm256_add_pd(s0, y0);
        c0 = _mm256_sub_pd(_mm256_sub_pd(t0, s0), y0);
        s0 = t0;
        __m256d y1 = _mm256_sub_pd(v1, c1);
        __m256d t1 = _mm256_add_pd(s1, y1);
        c1 = _mm256_sub_pd(_mm256_sub_pd(t1, s1), y1);
        s1 = t1;
    }
    alignas(32) double b0[4], b1[4];
    _mm256_store_pd(b0, s0);
    _mm256_store_pd(b1, s1);
    KahanComplex acc;
    acc.add({b0[0], b0[1]});
    acc.add({b0[2], b0[3]});
    acc.add({b1[0], b1[1]});
    acc.add({b1[2], b1[3]});
    for (std::size_t i = 4 * pairs; i < n; ++i) acc.add(a[i]);
    return acc.sum;
}

void mul_conj_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    double* po = reinterpret_cast<double*>(out);
    std::size_t pairs = n / 2; // 2 complexes per 256-bit vector
    for (std::size_t i = 0; i < pairs; ++i) {
        __m256d va = _mm256_loadu_pd(pa + 4 * i); // [ar0 ai0 ar1 ai1]
        __m256d vb = _mm256_loadu_pd(pb + 4 * i);
        // (ar+i*ai)(br-i*bi) = (ar*br + ai*bi) + i*(ai*br - ar*bi)
        __m256d br = _mm256_movedup_pd(vb);                    // [br0 br0 br1 br1]
        __m256d bi = _mm256_permute_pd(vb, 0b1111);            // [bi0 bi0 bi1 bi1]
        __m256d aswap = _mm256_permute_pd(va, 0b0101);         // [ai0 ar0 ai1 ar1]
        __m256d re_part = _mm256_mul_pd(va, br);               // [ar*br ai*br ...]
        __m256d im_part = _mm256_mul_pd(aswap, bi);            // [ai*bi ar*bi ...]
        // want even lanes re_part + im_part, odd lanes re_part - im_part;
        // addsub gives even minus / odd plus, so negate im_part first
        __m256d res = _mm256_addsub_pd(re_part, _mm256_sub_pd(_mm256_setzero_pd(), im_part));
        _mm256_storeu_pd(po + 4 * i, res);
    }
    for (std::size_t i = 2 * pairs; i < n; ++i) out[i] = a[i] * std::conj(b[i]);
}

cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    std::size_t pairs = n / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
        __m256d va = _mm256_loadu_pd(pa + 4 * i);
        __m256d vb = _mm256_loadu_pd(pb + 4 * i);
        __m256d br = _mm256_movedup_pd(vb);
        __m256d bi = _mm256_permute_pd(vb, 0b1111);
        __m256d aswap = _mm256_permute_pd(va, 0b0101);
        __m256d re_part = _mm256_mul_pd(va, br);
        __m256d im_part = _mm256_mul_pd(aswap, bi);
        __m256d v = _mm256_addsub_pd(re_part, _mm256_sub_pd(_mm256_setzero_pd(), im_part));
        __m256d y = _mm256_sub_pd(v, c);
        __m256d t = _mm256_add_pd(s, y);
        c = _mm256_sub_pd(_mm256_sub_pd(t, s), y);
        s = t;
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, s);
    KahanComplex acc;
    acc.add({buf[0], buf[1]});
    acc.add({buf[2], buf[3]});
    for (std::size_t i = 2 * pairs; i < n; ++i) acc.add(a[i] * std::conj(b[i]));
    return acc.sum;
}

double l2_diff_avx2(const cplx* a, const cplx* b, std::size_t n) {
    const double* pa = reinterpret_cast<const double*>(a);
    const double* pb = reinterpret_cast<const double*>(b);
    __m256d s = _mm256_setzero_pd(), c = _mm256_setzero_pd();
    std::size_t pairs = n / 2;
    for (std::size_t i = 0; i < pairs; ++i) {
        __m256d va = _mm256_loadu_pd(pa + 4 * i);
        __m256d vb = _mm256_loadu_pd(pb + 4 * i);
        __m256d d = _mm256_sub_pd(va, vb);
        __m256d v = _mm256_mul_pd(d, d);
        __m256d y = _mm256_sub_pd(v, c);
        __m256d t = _mm256_add_pd(s, y);
        c = _mm256_sub_pd(_mm256_sub_pd(t, s), y);
        s = t;
    }
    alignas(32) double buf[4];
    _mm256_store_pd(buf, s);
    KahanReal acc;
    acc.add(buf[0] + buf[1]);
    acc.add(buf[2] + buf[3]);
    for (std::size_t i = 2 * pairs; i < n; ++i) {
        double dr = a[i].real() - b[i].real();
        double di = a[i].imag() - b[i].imag();
        acc.add(dr * dr + di * di);
    }
    return acc.sum;
}

std::size_t arc_count_avx2(const double* x, std::size_t n, double lo, double hi) {
    __m256d vlo = _mm256_set1_pd(lo);
    __m256d vhi = _mm256_set1_pd(hi);
    std::size_t quads = n / 4;
    std::size_t count = 0;
    for (std::size_t i = 0; i < quads; ++i) {
        __m256d v = _mm256_loadu_pd(x + 4 * i);
        __m256d ge = _mm256_cmp_pd(v, vlo, _CMP_GE_OQ);
        __m256d lt = _mm256_cmp_pd(v, vhi, _CMP_LT_OQ);
        int mask = _mm256_movemask_pd(_mm256_and_pd(ge, lt));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
    }
    for (std::size_t i = 4 * quads; i < n; ++i) count += (x[i] >= lo && x[i] < hi) ? 1 : 0;
    return count;
}

namespace {

constexpr std::size_t kAnchorStride = 128; // per lane: 4*128 elements between anchors

// Complex multiply of lane vectors (re,im) pairs: w *= s.
inline void lane_cmul(__m256d& wre, __m256d& wim, __m256d sre, __m256d sim) {
    __m256d re = _mm256_sub_pd(_mm256_mul_pd(wre, sre), _mm256_mul_pd(wim, sim));
    __m256d im = _mm256_add_pd(_mm256_mul_pd(wre, sim), _mm256_mul_pd(wim, sre));
    wre = re;
    wim = im;
}

// Runs the 4-lane quadratic-phase rotator over [base, stop) (absolute element
// indices relative to the stream start), handing each value to `emit(idx, re, im)`
// via buffered stores.
template <class Emit>
void phase_run(std::size_t n, double p0, double p1, double p2, long long n0, Emit&& emit) {
    for (std::size_t base = 0; base < n; base += 4 * kAnchorStride) {
        std::size_t block = n - base < 4 * kAnchorStride ? n - base : 4 * kAnchorStride;
        if (block < 8) { // tiny tail: scalar anchors
            for (std::size_t i = 0; i < block; ++i) {
                cplx v = exact_phase(n0 + static_cast<long long>(base + i), p0, p1, p2);
                emit(base + i, v.real(), v.imag());
            }
            continue;
        }
        // lanes hold elements base+lane, stepping by 4
        alignas(32) double wre[4], wim[4], sre[4], sim[4];
        for (int l = 0; l < 4; ++l) {
            long long j = n0 + static_cast<long long>(base) + l;
            cplx w = exact_phase(j, p0, p1, p2);
            wre[l] = w.real();
            wim[l] = w.imag();
            // stride-4 step: phase(j+4) - phase(j) = 4 p1 + (8j+16) p2
            double st = frac_unit(frac_mul(4, p1) + frac_mul(8 * j + 16, p2));
            cplx s = unit_phase(st);
            sre[l] = s.real();
            sim[l] = s.imag();
        }
        cplx tw = unit_phase(32.0 * frac_unit(p2)); // step of the stride-4 step
        __m256d vwre = _mm256_load_pd(wre), vwim = _mm256_load_pd(wim);
        __m256d vsre = _mm256_load_pd(sre), vsim = _mm256_load_pd(sim);
        __m256d vtre = _mm256_set1_pd(tw.real()), vtim = _mm256_set1_pd(tw.imag());

        std::size_t full = block / 4;
        alignas(32) double bre[4], bim[4];
        for (std::size_t m = 0; m < full; ++m) {
            _mm256_store_pd(bre, vwre);
            _mm256_store_pd(bim, vwim);
            std::size_t idx = base + 4 * m;
            emit(idx + 0, bre[0], bim[0]);
            emit(idx + 1, bre[1], bim[1]);
            emit(idx + 2, bre[2], bim[2]);
            emit(idx + 3, bre[3], bim[3]);
            lane_cmul(vwre, vwim, vsre, vsim);
            lane_cmul(vsre, vsim, vtre, vtim);
        }
        for (std::size_t i = base + 4 * full; i < base + block; ++i) {
            cplx v = exact_phase(n0 + static_cast<long long>(i), p0, p1, p2);
            emit(i, v.real(), v.imag());
        }
    }
}

} // namespace

void phase_fill_avx2(cplx* out, std::size_t n, double p0, double p1, double p2, long long n0) {
    phase_run(n, p0, p1, p2, n0,
              [out](std::size_t i, double re, double im) { out[i] = {re, im}; });
}

cplx phase_sum_avx2(std::size_t n, double p0, double p1, double p2, long long n0) {
    KahanComplex acc;
    phase_run(n, p0, p1, p2, n0,
              [&acc](std::size_t, double re, double im) { acc.add({re, im}); });
    return acc.sum;
}

} // namespace sumdyn::kern::detail

#endif // __x86_64__
