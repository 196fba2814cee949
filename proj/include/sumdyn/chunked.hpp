#pragma once

#include <cstdint>
#include <future>
#include <vector>

namespace sumdyn {

// Global parallelism cap, set once by the CLI's --threads flag.
int max_threads();
void set_max_threads(int n);

// Deterministic chunked reduction: the index range is split into fixed-size
// chunks, each chunk produces a partial via `f(begin, end)`, and partials are
// combined strictly in chunk order. The result is independent of the thread
// count. T needs `merge(const T&)`.
template <class T, class F>
T chunked_reduce(std::int64_t begin, std::int64_t end, F&& f) {
    constexpr std::int64_t kChunk = 1 << 16;
    if (end <= begin) return T{};
    std::int64_t n_chunks = (end - begin + kChunk - 1) / kChunk;
    int threads = max_threads();
    std::vector<T> partials(static_cast<std::size_t>(n_chunks));

    auto run_range = [&](std::int64_t c0, std::int64_t c1) {
        for (std::int64_t c = c0; c < c1; ++c) {
            std::int64_t lo = begin + c * kChunk;
            std::int64_t hi = lo + kChunk < end ? lo + kChunk : end;
            partials[static_cast<std::size_t>(c)] = f(lo, hi);
        }
    };

    if (threads <= 1 || n_chunks <= 1) {
        run_range(0, n_chunks);
    } else {
        int workers = threads < n_chunks ? threads : static_cast<int>(n_chunks);
        std::vector<std::future<void>> futs;
        std::int64_t per = (n_chunks + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            std::int64_t c0 = w * per;
            std::int64_t c1 = c0 + per < n_chunks ? c0 + per : n_chunks;
            if (c0 >= c1) break;
            futs.push_back(std::async(std::launch::async, run_range, c0, c1));
        }
        for (auto& fu : futs) fu.get();
    }

    T total{};
    for (auto& p : partials) total.merge(p);
    return total;
}

} // namespace sumdyn
