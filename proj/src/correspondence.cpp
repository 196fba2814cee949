#include "sumdyn/correspondence.hpp"

#include <algorithm>

namespace sumdyn {

SymbolicModel build_symbolic(const NaturalSet& a) {
    if (a.horizon() < 2) throw ArgumentError("build_symbolic: horizon must be >= 2");
    const std::uint64_t h = a.horizon();

    // bits[m-1] = a(m) = [m-1 in A]; a(1) = 0 since 0 is not a natural here.
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(h) + 1, 0);
    for (std::uint64_t n = 1; n <= h; ++n)
        if (a.contains(n)) bits[static_cast<std::size_t>(n)] = 1;

    SymbolicModel model{DynamicalSystem::symbolic(std::move(bits)), StatePoint{}, OpenRegion{}, h};
    model.point = model.system.origin();

    // E: ball of radius 1/2 about the one-symbol point "1"; membership only
    // ever reads the first symbol, making E clopen under the shift metric.
    StatePoint cyl_center;
    cyl_center.sym = SymbolicWindow{
        std::make_shared<const std::vector<std::uint8_t>>(std::vector<std::uint8_t>{1}), 0};
    model.cylinder = OpenRegion::ball(std::move(cyl_center), 0.5);

    for (std::uint64_t n = 1; n <= h; ++n) {
        bool in_set = a.contains(n);
        bool in_cyl = model.system.member(model.cylinder,
                                          model.system.apply(model.point, static_cast<long long>(n)));
        if (in_set != in_cyl)
            throw ArgumentError("build_symbolic: correspondence check failed at n = " +
                                std::to_string(n));
    }
    return model;
}

std::vector<GenericWindow> select_generic_windows(const NaturalSet& a, int count) {
    if (count < 1) throw ArgumentError("select_generic_windows: count must be >= 1");
    std::vector<GenericWindow> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // lengths horizon / 2^(count-1-i), smallest first, last = horizon
        std::uint64_t len = a.horizon() >> (count - 1 - i);
        if (len < 1) len = 1;
        std::uint64_t count_best = a.count_range(1, len);
        std::uint64_t best_start = 1;
        std::uint64_t cur = count_best;
        for (std::uint64_t start = 2; start + len - 1 <= a.horizon(); ++start) {
            cur -= a.contains(start - 1) ? 1 : 0;
            cur += a.contains(start + len - 1) ? 1 : 0;
            if (cur > count_best) {
                count_best = cur;
                best_start = start;
            }
        }
        out.push_back({FolnerWindow{best_start, len},
                       Rational(static_cast<std::int64_t>(count_best),
                                static_cast<std::int64_t>(len))});
    }
    return out;
}

} // namespace sumdyn
