#include "sumdyn/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "sumdyn/kernels.hpp"
#include "sumdyn/numeric.hpp"
#include "sumdyn/rng.hpp"

namespace sumdyn {

void PointCloudMeasure::check_weights() const {
    if (weights.empty()) return;
    if (weights.size() != count()) throw ArgumentError("cloud: weight count mismatch");
    KahanReal s;
    for (double w : weights) {
        if (w < 0.0) throw ArgumentError("cloud: negative weight");
        s.add(w);
    }
    if (std::fabs(s.sum - 1.0) > 1e-12)
        throw ArgumentError("cloud: weights must sum to 1 within 1e-12");
}

void PointCloudMeasure::export_columns(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cloud export: cannot write " + path);
    out.precision(17);
    for (std::size_t m = 0; m < count(); ++m) {
        for (int i = 0; i < arity; ++i) {
            const auto& p = at(m, i);
            if (p.is_symbolic()) {
                out << (i ? " " : "") << "s" << p.sym->shift;
            } else {
                for (std::size_t c = 0; c < p.coords.size(); ++c)
                    out << ((i || c) ? " " : "") << p.coords[c];
            }
        }
        if (!weights.empty()) out << " " << weights[m];
        out << "\n";
    }
}

PointCloudMeasure empirical_xi(const DynamicalSystem& sys, const StatePoint& a, int k,
                               std::size_t n_points) {
    if (k < 1) throw ArgumentError("empirical_xi: k must be >= 1");
    if (n_points < 1) throw ArgumentError("empirical_xi: need at least one point");
    auto factor = sys.pronilfactor(k - 1 >= 1 ? k - 1 : 1);
    if (!factor) throw ArgumentError("empirical_xi: system has no explicit pronilfactor");
    const DynamicalSystem& fsys = *factor->target;
    StatePoint z = factor->map(a);

    PointCloudMeasure cloud;
    cloud.arity = k;
    cloud.tuples.reserve(n_points * static_cast<std::size_t>(k));
    for (std::size_t n = 1; n <= n_points; ++n) {
        for (int i = 1; i <= k; ++i)
            cloud.tuples.push_back(
                fsys.apply(z, static_cast<long long>(i) * static_cast<long long>(n)));
    }
    cloud.provenance = "xi(k=" + std::to_string(k) + ",N=" + std::to_string(n_points) + ")";
    return cloud;
}

PointCloudMeasure build_sigma(const DynamicalSystem& sys, const PointCloudMeasure& xi,
                              const StatePoint& a, FiberLift lift, std::uint64_t seed) {
    PointCloudMeasure sigma;
    sigma.arity = xi.arity + 1;
    sigma.tuples.reserve(xi.tuples.size() + xi.count());

    if (lift == FiberLift::identity) {
        // requires the factor point space to coincide with the state space
        if (sys.kind() != SystemKind::symbolic_shift && !xi.tuples.empty() &&
            static_cast<int>(xi.tuples.front().coords.size()) != sys.dimension())
            throw ArgumentError("build_sigma: identity lift needs an identity factor");
        for (std::size_t m = 0; m < xi.count(); ++m) {
            sigma.tuples.push_back(a);
            for (int i = 0; i < xi.arity; ++i) sigma.tuples.push_back(xi.at(m, i));
        }
    } else {
        if (sys.kind() != SystemKind::skew_product)
            throw ArgumentError("build_sigma: uniform fiber lift is defined for the "
                                "skew product over its base circle");
        if (xi.tuples.empty() || xi.tuples.front().coords.size() != 1)
            throw ArgumentError("build_sigma: uniform fiber lift needs base-circle xi");
        Rng rng(seed);
        for (std::size_t m = 0; m < xi.count(); ++m) {
            sigma.tuples.push_back(a);
            for (int i = 0; i < xi.arity; ++i) {
                double base = xi.at(m, i).coords[0];
                sigma.tuples.push_back(StatePoint::torus({base, rng.uniform01()}));
            }
        }
    }
    sigma.provenance = xi.provenance + (lift == FiberLift::identity ? "+identity" : "+fiber");
    return sigma;
}

PointCloudMeasure naive_sigma(const DynamicalSystem& sys, const StatePoint& a, int k,
                              std::size_t n_points) {
    PointCloudMeasure cloud;
    cloud.arity = k + 1;
    cloud.tuples.reserve(n_points * static_cast<std::size_t>(k + 1));
    for (std::size_t n = 1; n <= n_points; ++n) {
        cloud.tuples.push_back(a);
        for (int i = 1; i <= k; ++i)
            cloud.tuples.push_back(
                sys.apply(a, static_cast<long long>(i) * static_cast<long long>(n)));
    }
    cloud.provenance = "naive_sigma(k=" + std::to_string(k) + ",N=" + std::to_string(n_points) + ")";
    return cloud;
}

// ---------------------------------------------------------------------------
// Phase-stream helpers for products of trig observables along orbits.

namespace {

struct ProductFactor {
    const StatePoint* point;
    long long mult; // evaluated at T^{mult * n} point
    const std::vector<long long>* freq;
};

// Phase of the product over factors as p0 + n p1 + n^2 p2 (torus kinds).
OrbitPhase product_phase(const DynamicalSystem& sys, const std::vector<ProductFactor>& factors) {
    OrbitPhase total;
    for (const auto& f : factors) {
        OrbitPhase ph = orbit_phase(sys, *f.point, *f.freq);
        total.p0 += ph.p0;
        total.p1 += static_cast<double>(f.mult) * ph.p1;
        total.p2 += static_cast<double>(f.mult) * static_cast<double>(f.mult) * ph.p2;
    }
    total.p0 = frac_unit(total.p0);
    total.p1 = frac_unit(total.p1);
    total.p2 = frac_unit(total.p2);
    return total;
}

// Iterates the Cartesian product of term choices across polys, calling
// visit(coeff, chosen term indices).
template <class Visit>
void for_each_term_combo(const std::vector<const TrigPoly*>& polys, Visit&& visit) {
    for (const auto* p : polys)
        if (p->terms.empty()) return; // empty polynomial: the product vanishes
    std::vector<std::size_t> choice(polys.size(), 0);
    while (true) {
        std::complex<double> coeff{1.0, 0.0};
        for (std::size_t i = 0; i < polys.size(); ++i)
            coeff *= polys[i]->terms[choice[i]].coeff;
        visit(coeff, choice);
        std::size_t i = 0;
        for (; i < polys.size(); ++i) {
            if (++choice[i] < polys[i]->terms.size()) break;
            choice[i] = 0;
        }
        if (i == polys.size()) break;
    }
}

} // namespace

std::complex<double> estimate_joining(const DynamicalSystem& sys, const StatePoint& a, int k,
                                      std::size_t n_avg, const std::vector<TrigPoly>& f,
                                      std::size_t cloud) {
    if (static_cast<int>(f.size()) != k + 1)
        throw ArgumentError("estimate_joining: need observables f_0..f_k");
    if (sys.kind() == SystemKind::symbolic_shift)
        throw KindMismatchError("estimate_joining: torus systems only");
    if (cloud < 1 || n_avg < 1) throw ArgumentError("estimate_joining: empty averages");

    std::vector<const TrigPoly*> polys;
    for (const auto& p : f) polys.push_back(&p);

    KahanComplex total;
    for (std::size_t j = 1; j <= cloud; ++j) {
        StatePoint x = sys.apply(a, static_cast<long long>(j));
        for_each_term_combo(polys, [&](std::complex<double> coeff,
                                       const std::vector<std::size_t>& choice) {
            std::vector<ProductFactor> factors;
            factors.reserve(polys.size());
            for (std::size_t i = 0; i < polys.size(); ++i)
                factors.push_back({&x, static_cast<long long>(i),
                                   &polys[i]->terms[choice[i]].freq});
            OrbitPhase ph = product_phase(sys, factors);
            total.add(coeff * kern::phase_sum(n_avg, ph.p0, ph.p1, ph.p2, 1));
        });
    }
    return total.sum / static_cast<double>(n_avg) / static_cast<double>(cloud);
}

ProgressiveReport check_progressive(const DynamicalSystem& sys, const PointCloudMeasure& sigma,
                                    const std::vector<OpenRegion>& regions, long long n_max) {
    const int k = static_cast<int>(regions.size());
    if (sigma.arity != k + 1)
        throw ArgumentError("check_progressive: sigma arity must be k+1");
    sigma.check_weights();

    ProgressiveReport rep;
    // static part: tuples already inside X x U_1 x ... x U_k
    std::vector<std::size_t> live;
    KahanReal base;
    for (std::size_t m = 0; m < sigma.count(); ++m) {
        bool in = true;
        for (int j = 1; j <= k && in; ++j)
            in = sys.member(regions[static_cast<std::size_t>(j - 1)], sigma.at(m, j));
        if (in) {
            live.push_back(m);
            base.add(sigma.weight(m));
        }
    }
    rep.base_mass = base.sum;
    if (live.empty()) {
        rep.vacuous = true;
        return rep;
    }

    for (long long n = 1; n <= n_max; ++n) {
        KahanReal mass;
        std::size_t sample = 0;
        bool any = false;
        for (auto m : live) {
            bool in = true;
            for (int j = 1; j <= k && in; ++j)
                in = sys.member(regions[static_cast<std::size_t>(j - 1)],
                                sys.apply(sigma.at(m, j - 1), n));
            if (in) {
                if (!any) sample = m;
                any = true;
                mass.add(sigma.weight(m));
            }
        }
        if (any) rep.witnesses.push_back({n, mass.sum, sample});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Cell machinery

namespace {

int cell_index(const StatePoint& p, int resolution) {
    int idx = 0;
    for (double c : p.coords) {
        int b = static_cast<int>(std::floor(c * resolution));
        if (b < 0) b = 0;
        if (b >= resolution) b = resolution - 1;
        idx = idx * resolution + b;
    }
    return idx;
}

int cells_per_point(const DynamicalSystem& sys, int resolution) {
    int total = 1;
    for (int d = 0; d < sys.dimension(); ++d) total *= resolution;
    return total;
}

} // namespace

DominationReport check_marginal_domination(const DynamicalSystem& sys,
                                           const PointCloudMeasure& sigma,
                                           const PointCloudMeasure& mu_cloud, int resolution) {
    if (mu_cloud.arity != 1)
        throw ArgumentError("check_marginal_domination: mu reference must have arity 1");
    sigma.check_weights();
    mu_cloud.check_weights();

    const int k = sigma.arity - 1;
    const int ncells = cells_per_point(sys, resolution);
    const auto n_sigma = static_cast<double>(sigma.count());
    const auto n_mu = static_cast<double>(mu_cloud.count());

    std::vector<double> mu_freq(static_cast<std::size_t>(ncells), 0.0);
    for (std::size_t m = 0; m < mu_cloud.count(); ++m)
        mu_freq[static_cast<std::size_t>(cell_index(mu_cloud.at(m, 0), resolution))] +=
            mu_cloud.weight(m);

    DominationReport rep;
    rep.pass = true;
    rep.worst_excess = -1e300;
    rep.cells = nlohmann::json::array();
    for (int i = 1; i <= k; ++i) {
        std::vector<double> freq(static_cast<std::size_t>(ncells), 0.0);
        for (std::size_t m = 0; m < sigma.count(); ++m)
            freq[static_cast<std::size_t>(cell_index(sigma.at(m, i), resolution))] +=
                sigma.weight(m);
        double worst = -1e300;
        int viol = 0;
        for (int c = 0; c < ncells; ++c) {
            double p = freq[static_cast<std::size_t>(c)];
            double q = mu_freq[static_cast<std::size_t>(c)];
            double slack = 3.0 * (std::sqrt(std::max(p * (1.0 - p), 0.0) / n_sigma) +
                                  i * std::sqrt(std::max(q * (1.0 - q), 0.0) / n_mu)) +
                           (1.0 + i) / std::min(n_sigma, n_mu);
            double excess = p - (static_cast<double>(i) * q + slack);
            if (excess > worst) worst = excess;
            if (excess > 0.0) ++viol;
        }
        rep.violations += viol;
        rep.worst_excess = std::max(rep.worst_excess, worst);
        nlohmann::json cj;
        cj["coordinate"] = i;
        cj["violations"] = viol;
        cj["worst_excess"] = worst;
        rep.cells.push_back(cj);
    }
    rep.pass = rep.violations == 0;
    return rep;
}

InvarianceReport check_sigma_invariance(const DynamicalSystem& sys,
                                        const PointCloudMeasure& sigma, int steps,
                                        int resolution) {
    if (steps < 1) throw ArgumentError("check_sigma_invariance: steps must be >= 1");
    sigma.check_weights();
    const int k = sigma.arity - 1;
    const int per_point = cells_per_point(sys, resolution);

    // joint cells over all k+1 coordinates
    std::size_t total_cells = 1;
    for (int i = 0; i <= k; ++i) total_cells *= static_cast<std::size_t>(per_point);
    if (total_cells > (1u << 22))
        throw ArgumentError("check_sigma_invariance: resolution too fine for joint cells");

    std::vector<double> before(total_cells, 0.0), after(total_cells, 0.0);
    for (std::size_t m = 0; m < sigma.count(); ++m) {
        std::size_t ci = 0, cj = 0;
        for (int i = 0; i <= k; ++i) {
            const StatePoint& p = sigma.at(m, i);
            ci = ci * static_cast<std::size_t>(per_point) +
                 static_cast<std::size_t>(cell_index(p, resolution));
            StatePoint q = sys.apply(p, static_cast<long long>(i) * steps);
            cj = cj * static_cast<std::size_t>(per_point) +
                 static_cast<std::size_t>(cell_index(q, resolution));
        }
        before[ci] += sigma.weight(m);
        after[cj] += sigma.weight(m);
    }
    InvarianceReport rep;
    rep.cells = static_cast<int>(total_cells);
    for (std::size_t c = 0; c < total_cells; ++c)
        rep.max_cell_discrepancy = std::max(rep.max_cell_discrepancy,
                                            std::fabs(before[c] - after[c]));
    return rep;
}

DiagonalAverageReport check_diagonal_average(const DynamicalSystem& sys, const StatePoint& a,
                                             int k, std::size_t n_avg,
                                             const std::vector<TrigPoly>& g, std::size_t cloud) {
    if (static_cast<int>(g.size()) != k)
        throw ArgumentError("check_diagonal_average: need observables g_1..g_k");
    if (sys.kind() == SystemKind::symbolic_shift)
        throw KindMismatchError("check_diagonal_average: torus systems only");

    // sigma cloud tuples (a, T^m z, ..., T^km z); lhs integrates the product
    // of g_i at T^n of coordinates 1..k
    PointCloudMeasure xi = empirical_xi(sys, a, k, cloud);
    PointCloudMeasure sigma = build_sigma(sys, xi, a, FiberLift::identity);

    std::vector<const TrigPoly*> polys;
    for (const auto& p : g) polys.push_back(&p);

    KahanComplex lhs_acc;
    for (std::size_t m = 0; m < sigma.count(); ++m) {
        for_each_term_combo(polys, [&](std::complex<double> coeff,
                                       const std::vector<std::size_t>& choice) {
            std::vector<ProductFactor> factors;
            for (std::size_t i = 0; i < polys.size(); ++i)
                factors.push_back({&sigma.at(m, static_cast<int>(i) + 1), 1,
                                   &polys[i]->terms[choice[i]].freq});
            OrbitPhase ph = product_phase(sys, factors);
            lhs_acc.add(coeff * kern::phase_sum(n_avg, ph.p0, ph.p1, ph.p2, 1));
        });
    }

    DiagonalAverageReport rep;
    rep.lhs = lhs_acc.sum / static_cast<double>(n_avg) / static_cast<double>(sigma.count());

    std::vector<TrigPoly> f;
    f.push_back(TrigPoly::constant(1.0));
    for (const auto& p : g) f.push_back(p);
    rep.rhs = estimate_joining(sys, a, k, n_avg, f, cloud);
    rep.diff = std::abs(rep.lhs - rep.rhs);
    return rep;
}

CoordinateInvarianceReport check_coordinate_invariance(const DynamicalSystem& sys,
                                                       const StatePoint& a, int k,
                                                       std::size_t n_avg, const TrigPoly& big_g,
                                                       std::size_t cloud) {
    if (sys.kind() == SystemKind::symbolic_shift)
        throw KindMismatchError("check_coordinate_invariance: torus systems only");
    const int dim = sys.dimension();
    PointCloudMeasure xi = empirical_xi(sys, a, k, cloud);
    PointCloudMeasure sigma = build_sigma(sys, xi, a, FiberLift::identity);

    // u_N on coordinates 0..k-1, v_N on coordinates 1..k
    auto averaged = [&](std::size_t m, int offset) {
        KahanComplex acc;
        for (const auto& term : big_g.terms) {
            // split the k*dim frequency vector across tuple coordinates
            std::vector<std::vector<long long>> per_coord(static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < term.freq.size(); ++i) {
                auto coord = i / static_cast<std::size_t>(dim);
                if (coord >= static_cast<std::size_t>(k))
                    throw ArgumentError("check_coordinate_invariance: G frequency too long");
                per_coord[coord].push_back(term.freq[i]);
            }
            std::vector<ProductFactor> factors;
            for (int i = 0; i < k; ++i)
                factors.push_back({&sigma.at(m, i + offset), 1,
                                   &per_coord[static_cast<std::size_t>(i)]});
            OrbitPhase ph = product_phase(sys, factors);
            acc.add(term.coeff * kern::phase_sum(n_avg, ph.p0, ph.p1, ph.p2, 1));
        }
        return acc.sum / static_cast<double>(n_avg);
    };

    KahanReal l2, un, vn;
    for (std::size_t m = 0; m < sigma.count(); ++m) {
        std::complex<double> u = averaged(m, 0);
        std::complex<double> v = averaged(m, 1);
        double w = sigma.weight(m);
        l2.add(w * std::norm(u - v));
        un.add(w * std::norm(u));
        vn.add(w * std::norm(v));
    }
    CoordinateInvarianceReport rep;
    rep.discrepancy = std::sqrt(std::max(l2.sum, 0.0));
    rep.u_norm = std::sqrt(std::max(un.sum, 0.0));
    rep.v_norm = std::sqrt(std::max(vn.sum, 0.0));
    return rep;
}

CorrelationBoundReport check_correlation_orthogonality(
    const DynamicalSystem& sys, const StatePoint& a, const TrigPoly& g, int factor_level,
    const DynamicalSystem& y_sys, const StatePoint& y, const TrigPoly& big_f,
    std::size_t n_avg, int fiber_bins, std::size_t cloud, double slack) {
    if (sys.kind() == SystemKind::symbolic_shift)
        throw KindMismatchError("check_correlation_orthogonality: torus systems only");

    // lhs: |(1/N) sum_n g(T^n a) F(S^n y)| via a joint phase stream
    KahanComplex lhs_acc;
    for (const auto& tg : g.terms) {
        for (const auto& tf : big_f.terms) {
            OrbitPhase pg = orbit_phase(sys, a, tg.freq);
            OrbitPhase pf = orbit_phase(y_sys, y, tf.freq);
            double p0 = frac_unit(pg.p0 + pf.p0);
            double p1 = frac_unit(pg.p1 + pf.p1);
            double p2 = frac_unit(pg.p2 + pf.p2);
            lhs_acc.add(tg.coeff * tf.coeff * kern::phase_sum(n_avg, p0, p1, p2, 1));
        }
    }

    CorrelationBoundReport rep;
    rep.lhs = std::abs(lhs_acc.sum) / static_cast<double>(n_avg);

    // rhs: L1 norm of the conditional expectation over an orbit cloud
    auto factor = sys.pronilfactor(factor_level);
    if (!factor) throw ArgumentError("check_correlation_orthogonality: missing factor");
    double l1 = 0.0;
    if (factor->identity) {
        KahanReal acc;
        for (std::size_t j = 1; j <= cloud; ++j)
            acc.add(std::abs(g.eval(sys.apply(a, static_cast<long long>(j)))));
        l1 = acc.sum / static_cast<double>(cloud);
    } else {
        // fiber binning over the base coordinate
        std::vector<KahanComplex> bins(static_cast<std::size_t>(fiber_bins));
        std::vector<std::size_t> counts(static_cast<std::size_t>(fiber_bins), 0);
        for (std::size_t j = 1; j <= cloud; ++j) {
            StatePoint p = sys.apply(a, static_cast<long long>(j));
            double base = factor->map(p).coords.at(0);
            int b = std::min(fiber_bins - 1,
                             static_cast<int>(std::floor(base * fiber_bins)));
            bins[static_cast<std::size_t>(b)].add(g.eval(p));
            ++counts[static_cast<std::size_t>(b)];
        }
        KahanReal acc;
        for (int b = 0; b < fiber_bins; ++b) {
            if (counts[static_cast<std::size_t>(b)] == 0) continue;
            double w = static_cast<double>(counts[static_cast<std::size_t>(b)]) /
                       static_cast<double>(cloud);
            acc.add(w * std::abs(bins[static_cast<std::size_t>(b)].sum /
                                 static_cast<double>(counts[static_cast<std::size_t>(b)])));
        }
        l1 = acc.sum;
    }

    // sup norm of F on a dense grid of its coordinate space
    double fsup = 0.0;
    std::size_t fdim = 0;
    for (const auto& t : big_f.terms) fdim = std::max(fdim, t.freq.size());
    if (fdim <= 1) {
        for (int i = 0; i < 8192; ++i) {
            double c = (i + 0.5) / 8192.0;
            fsup = std::max(fsup, std::abs(big_f.eval_coords(&c, 1)));
        }
    } else {
        fsup = big_f.sup_bound();
    }

    rep.rhs = l1 * fsup;
    rep.slack = slack;
    rep.pass = rep.lhs <= rep.rhs + slack;
    return rep;
}

} // namespace sumdyn
