#include "sumdyn/progressions.hpp"

#include <algorithm>
#include <cmath>

#include "sumdyn/sets.hpp"

namespace sumdyn {

namespace {

nlohmann::json point_json(const StatePoint& p) {
    nlohmann::json j;
    if (p.is_symbolic()) {
        j["shift"] = p.sym->shift;
        j["valid_length"] = p.sym->valid_length();
    } else {
        j["coords"] = p.coords;
    }
    return j;
}

nlohmann::json region_json(const OpenRegion& r) {
    nlohmann::json disjuncts = nlohmann::json::array();
    for (const auto& conj : r.disjuncts) {
        nlohmann::json constraints = nlohmann::json::array();
        for (const auto& c : conj) {
            constraints.push_back({{"shift", c.shift},
                                   {"center", point_json(c.center)},
                                   {"radius", c.radius}});
        }
        disjuncts.push_back(std::move(constraints));
    }
    return disjuncts;
}

} // namespace

nlohmann::json ErdosProgression::to_json(const DynamicalSystem& sys) const {
    nlohmann::json j;
    j["system"] = sys.descriptor();
    j["points"] = nlohmann::json::array();
    for (const auto& p : points) j["points"].push_back(point_json(p));
    j["witnesses"] = witnesses;
    j["deviations"] = deviations;
    return j;
}

ProgressionCheck verify_progression(const DynamicalSystem& sys, const ErdosProgression& prog,
                                    double tol, int min_witnesses) {
    ProgressionCheck rep;
    const int k = prog.k();
    for (long long c : prog.witnesses) {
        double dev = 0.0;
        for (int i = 1; i <= k; ++i) {
            dev = std::max(dev, sys.distance(sys.apply(prog.points[static_cast<std::size_t>(i - 1)], c),
                                             prog.points[static_cast<std::size_t>(i)]));
        }
        rep.witness_deviation.push_back(dev);
        if (dev < tol) ++rep.passing_witnesses;
    }
    rep.pass = rep.passing_witnesses >= min_witnesses;
    return rep;
}

namespace {

// Continued-fraction expansion length of x; a rational x terminates quickly.
int cf_length(double x, int cap) {
    double v = x;
    int n = 0;
    for (; n < cap; ++n) {
        double fr = v - std::floor(v);
        if (fr < 1e-12) break;
        v = 1.0 / fr;
        if (!std::isfinite(v)) break;
    }
    return n;
}

} // namespace

ErdosProgression rotation_progression(const DynamicalSystem& sys, const StatePoint& a,
                                      double beta, int k, int n_witness, double tol,
                                      long long scan_budget) {
    if (sys.kind() != SystemKind::circle_rotation)
        throw KindMismatchError("rotation_progression: needs a circle rotation");
    if (tol <= 0.0) throw ArgumentError("rotation_progression: tol must be positive");
    if (cf_length(sys.alpha(), 25) < 25)
        throw ArgumentError("rotation_progression: alpha looks rational "
                            "(short continued fraction)");

    ErdosProgression prog;
    double b = frac_unit(beta);
    for (int i = 0; i <= k; ++i)
        prog.points.push_back(sys.make_point({frac_unit(a.coords.at(0) + frac_mul(i, b))}));

    for (long long n = 1; n <= scan_budget; ++n) {
        double dev = circle_dist(frac_mul(n, sys.alpha()), b);
        if (dev < tol && (prog.deviations.empty() || dev <= prog.deviations.back())) {
            prog.witnesses.push_back(n);
            prog.deviations.push_back(dev);
            if (static_cast<int>(prog.witnesses.size()) >= n_witness) return prog;
        }
    }
    throw BudgetError("rotation_progression: witness scan budget exhausted after " +
                      std::to_string(prog.witnesses.size()) + " of " +
                      std::to_string(n_witness) + " witnesses");
}

namespace {

// max_i d(T^c y_{i-1}, y_i) with y_0 = a; allocation-free on the torus kinds
// (these run inside million-step scans).
double tuple_deviation(const DynamicalSystem& sys, const StatePoint& a,
                       const std::vector<StatePoint>& ys, long long c) {
    switch (sys.kind()) {
        case SystemKind::circle_rotation: {
            double step = frac_mul(c, sys.alpha());
            double dev = 0.0;
            const StatePoint* prev = &a;
            for (const auto& y : ys) {
                dev = std::max(dev,
                               circle_dist(frac_unit(prev->coords[0] + step), y.coords[0]));
                prev = &y;
            }
            return dev;
        }
        case SystemKind::skew_product: {
            double astep = frac_mul(c, sys.alpha());
            double qstep = frac_mul(c * c, sys.alpha());
            double dev = 0.0;
            const StatePoint* prev = &a;
            for (const auto& y : ys) {
                double x0 = prev->coords[0];
                double nx = frac_unit(x0 + astep);
                double ny = frac_unit(prev->coords[1] + frac_mul(2 * c, x0) + qstep);
                dev = std::max(dev, std::max(circle_dist(nx, y.coords[0]),
                                             circle_dist(ny, y.coords[1])));
                prev = &y;
            }
            return dev;
        }
        default: {
            double dev = sys.distance(sys.apply(a, c), ys[0]);
            for (std::size_t i = 1; i < ys.size(); ++i)
                dev = std::max(dev, sys.distance(sys.apply(ys[i - 1], c), ys[i]));
            return dev;
        }
    }
}

} // namespace

ProgressionSearch find_progression(const DynamicalSystem& sys, const StatePoint& a, int k,
                                   const ProgressionParams& params) {
    if (k < 1) throw ArgumentError("find_progression: k must be >= 1");
    if (params.shrink > 0.5 || params.shrink <= 0.0)
        throw ArgumentError("find_progression: shrink factor must lie in (0, 1/2]");
    if (params.targets && static_cast<int>(params.targets->size()) != k)
        throw ArgumentError("find_progression: need one target region per coordinate");

    ProgressionSearch result;

    // --- seed the tuple (y_1,...,y_k)
    std::vector<StatePoint> ys;
    if (params.seeds) {
        if (static_cast<int>(params.seeds->size()) != k)
            throw ArgumentError("find_progression: need k seed points");
        ys = *params.seeds;
    } else {
        // first orbit tuple (T^m a, ..., T^km a) inside the targets
        bool found = false;
        for (long long m = 1; m <= params.seed_scan; ++m) {
            std::vector<StatePoint> cand;
            bool ok = true;
            try {
                for (int j = 1; j <= k; ++j) {
                    StatePoint p = sys.apply(a, static_cast<long long>(j) * m);
                    if (params.targets &&
                        sys.margin((*params.targets)[static_cast<std::size_t>(j - 1)], p) <=
                            0.0) {
                        ok = false;
                        break;
                    }
                    cand.push_back(std::move(p));
                }
            } catch (const HorizonError&) {
                break; // symbolic window exhausted; no seed exists
            }
            if (ok) {
                ys = std::move(cand);
                found = true;
                break;
            }
        }
        if (!found) {
            result.budget_exhausted = true;
            return result;
        }
    }

    double r = params.r0;
    if (params.targets) {
        for (int j = 1; j <= k; ++j)
            r = std::min(r, sys.margin((*params.targets)[static_cast<std::size_t>(j - 1)],
                                        ys[static_cast<std::size_t>(j - 1)]) / 2.0);
        if (r <= 0.0) throw ArgumentError("find_progression: seed outside the target regions");
    }

    // --- nested stage: locate the limit tuple
    long long c_prev = 0;
    long long budget = params.locate_budget;
    while (r > params.tol && budget > 0) {
        bool hit = false;
        long long c = c_prev;
        while (budget > 0) {
            ++c;
            --budget;
            double dev;
            try {
                dev = tuple_deviation(sys, a, ys, c);
            } catch (const HorizonError&) {
                budget = 0; // symbolic orbit ran out; freeze what we have
                break;
            }
            if (dev < params.shrink * r) {
                // recenter at observed orbit points. Preferred: the arithmetic
                // orbit tuple (T^c a, ..., T^kc a), which keeps the candidate
                // gaps aligned (it lies on the empirical support of the
                // structured measure); accepted only when it verifiably sits
                // inside the current balls. Fallback: the image tuple.
                std::vector<StatePoint> next;
                bool ap_ok = true;
                try {
                    for (int j = 1; j <= k; ++j) {
                        StatePoint p = sys.apply(a, static_cast<long long>(j) * c);
                        if (!(sys.distance(p, ys[static_cast<std::size_t>(j - 1)]) <
                              params.shrink * r)) {
                            ap_ok = false;
                            break;
                        }
                        next.push_back(std::move(p));
                    }
                } catch (const HorizonError&) {
                    ap_ok = false;
                }
                if (!ap_ok) {
                    next.clear();
                    next.push_back(sys.apply(a, c));
                    for (int j = 1; j < k; ++j)
                        next.push_back(sys.apply(ys[static_cast<std::size_t>(j - 1)], c));
                }
                ys = std::move(next);
                r *= params.shrink;
                c_prev = c;
                ++result.stages;
                hit = true;
                break;
            }
        }
        if (!hit) break;
    }
    result.final_radius = r;
    if (r > params.tol) result.budget_exhausted = true;

    // --- certification: rescan witnesses against the frozen tuple, then keep
    // the longest nonincreasing-deviation subsequence of the hits
    ErdosProgression prog;
    prog.points.push_back(a);
    for (auto& y : ys) prog.points.push_back(y);

    std::vector<std::pair<long long, double>> hits;
    long long wbudget = params.witness_budget;
    for (long long c = 1; wbudget > 0; ++c, --wbudget) {
        double dev;
        try {
            dev = tuple_deviation(sys, a, ys, c);
        } catch (const HorizonError&) {
            break;
        }
        if (dev < params.tol) {
            hits.emplace_back(c, dev);
            if (hits.size() >= 256) break;
        }
    }

    if (!hits.empty()) {
        // O(m^2) chain extraction; hit counts are capped small
        const std::size_t m = hits.size();
        std::vector<int> len(m, 1), prev(m, -1);
        std::size_t best = 0;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (hits[j].second >= hits[i].second && len[j] + 1 > len[i]) {
                    len[i] = len[j] + 1;
                    prev[i] = static_cast<int>(j);
                }
            }
            if (len[i] > len[best]) best = i;
        }
        std::vector<std::size_t> chain;
        for (int i = static_cast<int>(best); i >= 0; i = prev[static_cast<std::size_t>(i)])
            chain.push_back(static_cast<std::size_t>(i));
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            prog.witnesses.push_back(hits[*it].first);
            prog.deviations.push_back(hits[*it].second);
        }
    }

    if (static_cast<int>(prog.witnesses.size()) >= params.min_witnesses) {
        result.progression = std::move(prog);
    } else {
        result.budget_exhausted = true;
    }
    return result;
}

ExtractResult extract_sumset(const DynamicalSystem& sys, const ErdosProgression& prog,
                             const std::vector<OpenRegion>& regions, int m_steps,
                             long long scan_budget) {
    const int k = prog.k();
    if (static_cast<int>(regions.size()) != k)
        throw ArgumentError("extract_sumset: need one region per coordinate 1..k");
    for (const auto& u : regions)
        if (!u.single_conjunction())
            throw ArgumentError("extract_sumset: regions must be single conjunctions");
    subset_count_capped(static_cast<std::size_t>(m_steps), k);

    // precondition: x_j inside U_j
    for (int j = 1; j <= k; ++j) {
        if (sys.margin(regions[static_cast<std::size_t>(j - 1)],
                       prog.points[static_cast<std::size_t>(j)]) <= 0.0)
            throw ArgumentError("extract_sumset: x_" + std::to_string(j) +
                                " is not inside U_" + std::to_string(j));
    }

    std::vector<OpenRegion> cur(regions); // U_{j, i-1}, 1-indexed via j-1
    ExtractResult res;
    res.transcript["steps"] = nlohmann::json::array();

    // witness supply: the progression's stored witnesses, then a forward scan
    std::size_t pool_pos = 0;
    long long last_c = 0;
    long long scans = 0;
    auto next_witness = [&](const std::vector<OpenRegion>& regs) -> std::optional<long long> {
        for (; pool_pos < prog.witnesses.size(); ++pool_pos) {
            long long c = prog.witnesses[pool_pos];
            if (c <= last_c) continue;
            bool ok = true;
            try {
                for (int j = 1; j <= k && ok; ++j)
                    ok = sys.member(regs[static_cast<std::size_t>(j - 1)],
                                    sys.apply(prog.points[static_cast<std::size_t>(j - 1)], c));
            } catch (const HorizonError&) {
                ok = false;
            }
            if (ok) {
                ++pool_pos;
                return c;
            }
        }
        for (long long c = last_c + 1; scans < scan_budget; ++c) {
            ++scans;
            bool ok = true;
            try {
                for (int j = 1; j <= k && ok; ++j)
                    ok = sys.member(regs[static_cast<std::size_t>(j - 1)],
                                    sys.apply(prog.points[static_cast<std::size_t>(j - 1)], c));
            } catch (const HorizonError&) {
                return std::nullopt;
            }
            if (ok) return c;
        }
        return std::nullopt;
    };

    for (int i = 1; i <= m_steps; ++i) {
        auto c = next_witness(cur);
        if (!c) {
            res.complete = false;
            res.transcript["status"] = "witness supply exhausted at step " + std::to_string(i);
            return res;
        }
        last_c = *c;
        res.b.push_back(*c);

        nlohmann::json step;
        step["i"] = i;
        step["b"] = *c;
        // region update: U_{j,i} = U_{j,i-1} intersect T^{-b} U_{j+1,i-1}
        std::vector<OpenRegion> next(static_cast<std::size_t>(k));
        for (int j = 1; j <= k - 1; ++j) {
            next[static_cast<std::size_t>(j - 1)] =
                cur[static_cast<std::size_t>(j - 1)].intersect(
                    cur[static_cast<std::size_t>(j)].preimage(*c));
        }
        next[static_cast<std::size_t>(k - 1)] = regions[static_cast<std::size_t>(k - 1)];
        cur = std::move(next);

        // the tuple stays inside the shrinking regions; record the margins
        nlohmann::json margins = nlohmann::json::array();
        for (int j = 1; j <= k; ++j) {
            double m;
            try {
                m = sys.margin(cur[static_cast<std::size_t>(j - 1)],
                               prog.points[static_cast<std::size_t>(j)]);
            } catch (const HorizonError&) {
                m = -1.0;
            }
            margins.push_back(m);
            if (m <= 0.0) {
                res.complete = false;
                res.transcript["status"] =
                    "tuple left region U_" + std::to_string(j) + " at step " + std::to_string(i);
                return res;
            }
        }
        step["margins"] = margins;
        nlohmann::json sizes = nlohmann::json::array();
        nlohmann::json regs = nlohmann::json::array();
        for (const auto& u : cur) {
            sizes.push_back(u.constraint_count());
            regs.push_back(region_json(u));
        }
        step["constraint_counts"] = sizes;
        step["regions"] = regs;
        res.transcript["steps"].push_back(std::move(step));
    }
    res.complete = true;
    res.transcript["status"] = "complete";
    res.transcript["b"] = res.b;
    return res;
}

InclusionReport verify_sumset_inclusion(const DynamicalSystem& sys, const StatePoint& x0,
                                        const std::vector<long long>& b,
                                        const std::vector<OpenRegion>& regions, int k) {
    if (static_cast<int>(regions.size()) < k)
        throw ArgumentError("verify_sumset_inclusion: need regions U_1..U_k");
    subset_count_capped(b.size(), k);

    InclusionReport rep;
    rep.pass = true;
    const std::size_t m = b.size();
    // ascending subset size, lexicographic within size
    std::vector<std::size_t> idx;
    for (int size = 1; size <= k && size <= static_cast<int>(m); ++size) {
        idx.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
        while (true) {
            long long sum = 0;
            for (auto i : idx) sum += b[i];
            ++rep.subsets_checked;
            bool ok = sys.member(regions[static_cast<std::size_t>(size - 1)],
                                 sys.apply(x0, sum)); // HorizonError propagates distinctly
            if (!ok) {
                rep.pass = false;
                std::vector<long long> subset;
                for (auto i : idx) subset.push_back(b[i]);
                rep.failures.push_back(std::move(subset));
            }
            int i = size - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                                 m - static_cast<std::size_t>(size - i)) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
    return rep;
}

} // namespace sumdyn
