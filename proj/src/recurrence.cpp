#include "sumdyn/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sumdyn/numeric.hpp"

namespace sumdyn {

void ExponentVector::validate() const {
    if (entries.empty()) throw ArgumentError("exponent vector must be nonempty");
    for (long long e : entries)
        if (e < 1) throw ArgumentError("exponent entries must be >= 1");
}

LcmReduction lcm_reduction(const ExponentVector& u, const ExponentVector& v) {
    u.validate();
    v.validate();
    if (u.size() != v.size()) throw ArgumentError("lcm_reduction: dimension mismatch");
    long long c = 1;
    for (long long vi : v.entries) c = std::lcm(c, vi);
    LcmReduction red;
    red.c = c;
    for (std::size_t i = 0; i < u.size(); ++i) {
        long long wi = c / v.entries[i] * u.entries[i];
        // exponent identity behind T_v^{-w_i} = T_u^{-c} on coordinate i
        if (c * u.entries[i] != v.entries[i] * wi)
            throw ArgumentError("lcm_reduction: exponent identity failed");
        red.w.entries.push_back(wi);
    }
    return red;
}

LineCloud make_line_cloud(double alpha, std::size_t count) {
    if (count < 1) throw ArgumentError("line cloud needs at least one point");
    LineCloud cloud;
    cloud.alpha = frac_unit(alpha);
    cloud.x.resize(count);
    cloud.y.resize(count);
    for (std::size_t m = 0; m < count; ++m) {
        double x = (static_cast<double>(m) + 0.5) / static_cast<double>(count);
        cloud.x[m] = x;
        cloud.y[m] = frac_unit(2.0 * x);
    }
    return cloud;
}

namespace {

inline bool in_arc(double v, double lo, double hi) { return v >= lo && v < hi; }

// membership of (x_m, y_m) shifted by (off1, off2) in the arc product
inline bool shifted_member(const LineCloud& c, std::size_t m, double off1, double off2,
                           const ArcProduct& a) {
    double x = c.x[m] + off1;
    if (x >= 1.0) x -= 1.0;
    double y = c.y[m] + off2;
    if (y >= 1.0) y -= 1.0;
    return in_arc(x, a.lo1, a.hi1) && in_arc(y, a.lo2, a.hi2);
}

} // namespace

RecurrenceReport check_recurrence_average(const LineCloud& cloud, const ExponentVector& u,
                                          const ExponentVector& v, const ArcProduct& arcs,
                                          long long window) {
    u.validate();
    v.validate();
    if (u.size() != 2 || v.size() != 2)
        throw ArgumentError("check_recurrence_average: the line cloud lives in X^2");
    if (window < 1) throw ArgumentError("check_recurrence_average: window must be >= 1");

    RecurrenceReport rep;
    const std::size_t count = cloud.x.size();

    // empirical T_v-invariance via joint cell frequencies (marginals cannot
    // see the line structure). The cloud is exact in distribution for v with
    // v2 = 2 v1; the check guards misuse.
    {
        constexpr int res = 16;
        std::vector<double> before(res * res, 0.0), after(res * res, 0.0);
        double w = 1.0 / static_cast<double>(count);
        double o1 = frac_mul(v.entries[0], cloud.alpha);
        double o2 = frac_mul(v.entries[1], cloud.alpha);
        auto bin = [&](double t) {
            int b = static_cast<int>(t * res);
            return b >= res ? res - 1 : b;
        };
        for (std::size_t m = 0; m < count; ++m) {
            before[static_cast<std::size_t>(bin(cloud.x[m]) * res + bin(cloud.y[m]))] += w;
            after[static_cast<std::size_t>(bin(frac_unit(cloud.x[m] + o1)) * res +
                                           bin(frac_unit(cloud.y[m] + o2)))] += w;
        }
        double disc = 0.0;
        for (int b = 0; b < res * res; ++b)
            disc = std::max(disc, std::fabs(before[static_cast<std::size_t>(b)] -
                                            after[static_cast<std::size_t>(b)]));
        rep.invariance_discrepancy = disc;
        rep.invariance_ok = disc <= 0.02;
        if (!rep.invariance_ok) return rep;
    }

    // static membership in A
    std::vector<std::size_t> live;
    for (std::size_t m = 0; m < count; ++m)
        if (shifted_member(cloud, m, 0.0, 0.0, arcs)) live.push_back(m);
    rep.set_mass = static_cast<double>(live.size()) / static_cast<double>(count);
    if (live.empty()) return rep;

    KahanReal avg;
    for (long long n = 1; n <= window; ++n) {
        double off1 = frac_mul(u.entries[0] * n, cloud.alpha);
        double off2 = frac_mul(u.entries[1] * n, cloud.alpha);
        std::size_t hits = 0;
        for (auto m : live)
            hits += shifted_member(cloud, m, off1, off2, arcs) ? 1 : 0;
        double mass = static_cast<double>(hits) / static_cast<double>(count);
        avg.add(mass);
        if (hits > 0) rep.witnesses.push_back(n);
    }
    rep.average = avg.sum / static_cast<double>(window);

    // witness density per dyadic sub-window, coarse "does not vanish" signal
    for (long long len = window; len >= 2; len /= 2) {
        long long lo = window - len + 1;
        auto begin = std::lower_bound(rep.witnesses.begin(), rep.witnesses.end(), lo);
        rep.dyadic_witness_density.push_back(
            static_cast<double>(rep.witnesses.end() - begin) / static_cast<double>(len));
        if (rep.dyadic_witness_density.size() >= 8) break;
    }
    return rep;
}

CounterexampleReport counterexample_demo(double alpha, long long window, double delta,
                                         std::size_t cloud_size) {
    if (window < 1) throw ArgumentError("counterexample_demo: window must be >= 1");
    CounterexampleReport rep;
    rep.window = window;
    rep.delta = delta;

    double min_gap = 1.0;
    for (long long n = 1; n <= window; ++n)
        min_gap = std::min(min_gap, circle_norm(frac_mul(3 * n, alpha)));
    rep.min_orbit_gap = min_gap;
    if (!(delta > 0.0) || delta >= min_gap / 2.0)
        throw ArgumentError("counterexample_demo: delta must lie in (0, min_gap/2); min_gap = " +
                            std::to_string(min_gap));

    LineCloud cloud = make_line_cloud(alpha, cloud_size);
    // H_delta = {(x, y): dist(y, 2x) < delta}; cloud points sit on H itself.
    // u = (2, 1): T_u^n (x, y) = (x + 2 n alpha, y + n alpha).
    rep.all_empty = true;
    for (long long n = 1; n <= window; ++n) {
        double off1 = frac_mul(2 * n, alpha);
        double off2 = frac_mul(n, alpha);
        std::size_t hits = 0;
        for (std::size_t m = 0; m < cloud.x.size(); ++m) {
            double x = frac_unit(cloud.x[m] + off1);
            double y = frac_unit(cloud.y[m] + off2);
            if (circle_dist(y, frac_unit(2.0 * x)) < delta) ++hits;
        }
        if (hits > 0) {
            rep.all_empty = false;
            rep.nonempty_n.push_back(n);
        }
    }
    return rep;
}

std::size_t containment_exceptions(const LineCloud& cloud, const ExponentVector& u,
                                   const ExponentVector& v, const ArcProduct& arcs,
                                   long long n) {
    LcmReduction red = lcm_reduction(u, v);
    std::size_t exceptions = 0;
    for (std::size_t m = 0; m < cloud.x.size(); ++m) {
        // right side: point in every T_v^{-w_i n} A
        bool rhs = true;
        for (std::size_t i = 0; i < 2 && rhs; ++i) {
            double o1 = frac_mul(v.entries[0] * red.w.entries[i] * n, cloud.alpha);
            double o2 = frac_mul(v.entries[1] * red.w.entries[i] * n, cloud.alpha);
            rhs = shifted_member(cloud, m, o1, o2, arcs);
        }
        if (!rhs) continue;
        // left side: point in T_u^{-c n} A
        double o1 = frac_mul(u.entries[0] * red.c * n, cloud.alpha);
        double o2 = frac_mul(u.entries[1] * red.c * n, cloud.alpha);
        if (!shifted_member(cloud, m, o1, o2, arcs)) ++exceptions;
    }
    return exceptions;
}

} // namespace sumdyn
