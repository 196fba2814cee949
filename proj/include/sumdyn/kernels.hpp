#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>

namespace sumdyn::kern {

// Data-parallel inner loops behind the averaging and norm machinery.
// Every operation has a scalar reference implementation and (on x86-64 with
// AVX2) a vectorized variant; the active backend is chosen once at runtime
// and can be forced for equivalence testing via force_backend() or the
// SUMDYN_KERNELS environment variable ("scalar" / "avx2").

enum class Backend { scalar, avx2 };

Backend active_backend();
void force_backend(Backend b);   // throws ArgumentError if unsupported
bool avx2_supported();
std::string backend_name();

using cplx = std::complex<double>;

// Compensated sum of a[0..n).
cplx sum(const cplx* a, std::size_t n);

// Compensated sum of a[i] * conj(b[i]).
cplx dot_conj(const cplx* a, const cplx* b, std::size_t n);

// out[i] = a[i] * conj(b[i]).
void mul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n);

// Compensated sum of |a[i] - b[i]|^2.
double l2_diff(const cplx* a, const cplx* b, std::size_t n);

// Count of x[i] whose value lies in the arc [lo, hi) of the circle; the
// inputs are assumed reduced to [0, 1) and lo < hi (no wrap).
std::size_t arc_count(const double* x, std::size_t n, double lo, double hi);

// Quadratic phase streams: element j (0-based) has value
//   e(2*pi*i * (p0 + (n0+j)*p1 + (n0+j)^2*p2)).
// Evaluated by rotator recurrences re-anchored periodically from exact
// integer-reduced phases, so long streams do not drift.
void phase_fill(cplx* out, std::size_t n, double p0, double p1, double p2, long long n0);
cplx phase_sum(std::size_t n, double p0, double p1, double p2, long long n0);

namespace detail {

// Scalar reference implementations (always available; the oracle side of the
// backend equivalence tests).
cplx sum_scalar(const cplx* a, std::size_t n);
cplx dot_conj_scalar(const cplx* a, const cplx* b, std::size_t n);
void mul_conj_scalar(const cplx* a, const cplx* b, cplx* out, std::size_t n);
double l2_diff_scalar(const cplx* a, const cplx* b, std::size_t n);
std::size_t arc_count_scalar(const double* x, std::size_t n, double lo, double hi);
void phase_fill_scalar(cplx* out, std::size_t n, double p0, double p1, double p2, long long n0);
cplx phase_sum_scalar(std::size_t n, double p0, double p1, double p2, long long n0);

#if defined(__x86_64__)
cplx sum_avx2(const cplx* a, std::size_t n);
cplx dot_conj_avx2(const cplx* a, const cplx* b, std::size_t n);
void mul_conj_avx2(const cplx* a, const cplx* b, cplx* out, std::size_t n);
double l2_diff_avx2(const cplx* a, const cplx* b, std::size_t n);
std::size_t arc_count_avx2(const double* x, std::size_t n, double lo, double hi);
void phase_fill_avx2(cplx* out, std::size_t n, double p0, double p1, double p2, long long n0);
cplx phase_sum_avx2(std::size_t n, double p0, double p1, double p2, long long n0);
#endif

// Exact phase anchor: e(2*pi*i * frac(p0 + j*p1 + j^2*p2)) with the mod-1
// reduction done in integer arithmetic. Shared by both backends' re-anchoring.
cplx exact_phase(long long j, double p0, double p1, double p2);

} // namespace detail

} // namespace sumdyn::kern
