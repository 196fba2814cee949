#include "sumdyn/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "sumdyn/chunked.hpp"
#include "sumdyn/errors.hpp"

namespace sumdyn {

namespace {
std::atomic<int> g_max_threads{1};
}

int max_threads() { return g_max_threads.load(); }
void set_max_threads(int n) { g_max_threads.store(n < 1 ? 1 : n); }

} // namespace sumdyn

namespace sumdyn::kern {

namespace {

Backend detect_backend() {
#if defined(__x86_64__)
    bool have = __builtin_cpu_supports("avx2");
#else
    bool have = false;
#endif
    if (const char* env = std::getenv("SUMDYN_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && have) return Backend::avx2;
    }
    return have ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_backend{detect_backend()};

} // namespace

Backend active_backend() { return g_backend.load(); }

bool avx2_supported() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

void force_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported())
        throw ArgumentError("kernels: avx2 backend not supported on this CPU");
    g_backend.store(b);
}

std::string backend_name() { return active_backend() == Backend::avx2 ? "avx2" : "scalar"; }

#if defined(__x86_64__)
#define SUMDYN_DISPATCH(fn, ...)                                  \
    (active_backend() == Backend::avx2 ? detail::fn##_avx2(__VA_ARGS__) \
                                       : detail::fn##_scalar(__VA_ARGS__))
#else
#define SUMDYN_DISPATCH(fn, ...) detail::fn##_scalar(__VA_ARGS__)
#endif

cplx sum(const cplx* a, std::size_t n) { return SUMDYN_DISPATCH(sum, a, n); }

cplx dot_conj(const cplx* a, const cplx* b, std::size_t n) {
    return SUMDYN_DISPATCH(dot_conj, a, b, n);
}

void mul_conj(const cplx* a, const cplx* b, cplx* out, std::size_t n) {
    SUMDYN_DISPATCH(mul_conj, a, b, out, n);
}

double l2_diff(const cplx* a, const cplx* b, std::size_t n) {
    return SUMDYN_DISPATCH(l2_diff, a, b, n);
}

std::size_t arc_count(const double* x, std::size_t n, double lo, double hi) {
    return SUMDYN_DISPATCH(arc_count, x, n, lo, hi);
}

void phase_fill(cplx* out, std::size_t n, double p0, double p1, double p2, long long n0) {
    SUMDYN_DISPATCH(phase_fill, out, n, p0, p1, p2, n0);
}

cplx phase_sum(std::size_t n, double p0, double p1, double p2, long long n0) {
    return SUMDYN_DISPATCH(phase_sum, n, p0, p1, p2, n0);
}

#undef SUMDYN_DISPATCH

} // namespace sumdyn::kern
