#include "sumdyn/uniformity.hpp"

#include <algorithm>
#include <cmath>

#include "sumdyn/kernels.hpp"
#include "sumdyn/numeric.hpp"
#include "sumdyn/rng.hpp"

namespace sumdyn {

double CyclicFunction::sup_norm() const {
    double s = 0.0;
    for (const auto& v : values) s = std::max(s, std::abs(v));
    return s;
}

// ---------------------------------------------------------------------------
// Cyclic box norms

namespace {

using cvec = std::vector<std::complex<double>>;

std::complex<double> cyclic_power(const cvec& f, int s) {
    const std::size_t n = f.size();
    if (s == 0) return kern::sum(f.data(), n) / static_cast<double>(n);
    cvec deriv(n);
    KahanComplex acc;
    for (std::size_t h = 0; h < n; ++h) {
        for (std::size_t i = 0; i < n; ++i)
            deriv[i] = f[(i + h) % n] * std::conj(f[i]);
        acc.add(cyclic_power(deriv, s - 1));
    }
    return acc.sum / static_cast<double>(n);
}

} // namespace

std::complex<double> gowers_power(const CyclicFunction& f, int s) {
    if (s < 0 || s > 6) throw ArgumentError("gowers_norm: s must lie in 0..6");
    if (f.values.empty()) throw ArgumentError("gowers_norm: empty function");
    return cyclic_power(f.values, s);
}

double gowers_norm(const CyclicFunction& f, int s) {
    std::complex<double> p = gowers_power(f, s);
    if (s == 0) return std::abs(p);
    double re = std::max(p.real(), 0.0);
    return std::pow(re, 1.0 / std::ldexp(1.0, s));
}

// ---------------------------------------------------------------------------
// Trajectory seminorms

namespace {

// Recursive power on sample arrays: base |cloud-and-time mean|^2, derivative
// levels average over shifts 1..H.
double sample_power(const std::vector<cvec>& samples, long long n_avg, long long h, int s) {
    if (s == 1) {
        KahanComplex acc;
        for (const auto& traj : samples)
            acc.add(kern::sum(traj.data(), static_cast<std::size_t>(n_avg)));
        double scale = static_cast<double>(n_avg) * static_cast<double>(samples.size());
        return std::norm(acc.sum / scale);
    }
    KahanReal acc;
    std::vector<cvec> deriv(samples.size());
    for (long long hh = 1; hh <= h; ++hh) {
        for (std::size_t j = 0; j < samples.size(); ++j) {
            const cvec& src = samples[j];
            std::size_t len = src.size() - static_cast<std::size_t>(hh);
            deriv[j].resize(len);
            kern::mul_conj(src.data() + hh, src.data(), deriv[j].data(), len);
        }
        acc.add(sample_power(deriv, n_avg, h, s - 1));
    }
    return acc.sum / static_cast<double>(h);
}

long long effective_h(long long n_avg, long long h_requested, int s) {
    long long h = h_requested > 0
                      ? h_requested
                      : std::max<long long>(8, static_cast<long long>(std::sqrt(
                                                   static_cast<double>(n_avg))));
    if (s >= 3) {
        // keep the nested cost H^{s-1} * N under ~4e8 samples
        double cap = std::pow(4e8 / static_cast<double>(n_avg),
                              1.0 / static_cast<double>(s - 1));
        h = std::min(h, std::max<long long>(8, static_cast<long long>(cap)));
    }
    return std::max<long long>(1, h);
}

cvec materialize(const DynamicalSystem& sys, const StatePoint& start, const Observable& f,
                 long long length) {
    if (const auto* poly = std::get_if<TrigPoly>(&f);
        poly != nullptr && sys.kind() != SystemKind::symbolic_shift) {
        cvec out(static_cast<std::size_t>(length), {0.0, 0.0});
        cvec term(static_cast<std::size_t>(length));
        for (const auto& t : poly->terms) {
            OrbitPhase ph = orbit_phase(sys, start, t.freq);
            kern::phase_fill(term.data(), term.size(), ph.p0, ph.p1, ph.p2, 1);
            for (std::size_t i = 0; i < out.size(); ++i) out[i] += t.coeff * term[i];
        }
        return out;
    }
    cvec out(static_cast<std::size_t>(length));
    for (long long n = 1; n <= length; ++n) {
        StatePoint p = sys.apply(start, n);
        out[static_cast<std::size_t>(n - 1)] =
            std::holds_alternative<TrigPoly>(f) ? std::get<TrigPoly>(f).eval(p)
                                                : std::get<GenericObservable>(f)(p);
    }
    return out;
}

} // namespace

SeminormResult seminorm_samples(const std::vector<cvec>& samples, long long n_avg,
                                long long h_budget, int s) {
    if (s < 0 || s > 4) throw ArgumentError("seminorm: s must lie in 0..4");
    if (samples.empty()) throw ArgumentError("seminorm: no sample trajectories");
    long long h = effective_h(n_avg, h_budget, s);
    long long need = n_avg + (s >= 2 ? (s - 1) * h : 0);
    for (const auto& traj : samples)
        if (static_cast<long long>(traj.size()) < need)
            throw ArgumentError("seminorm: sample arrays shorter than N + (s-1)H");

    SeminormResult res;
    res.s = s;
    res.n_avg = n_avg;
    res.h_requested = h_budget;
    res.h_effective = h;
    if (s == 0 || s == 1) {
        KahanComplex acc;
        for (const auto& traj : samples)
            acc.add(kern::sum(traj.data(), static_cast<std::size_t>(n_avg)));
        res.value = std::abs(acc.sum) /
                    (static_cast<double>(n_avg) * static_cast<double>(samples.size()));
        return res;
    }
    double power = sample_power(samples, n_avg, h, s);
    res.value = std::pow(std::max(power, 0.0), 1.0 / std::ldexp(1.0, s));
    return res;
}

SeminormResult seminorm_trajectory(const TrajectoryObservable& obs, int s) {
    if (obs.starts.empty()) throw ArgumentError("seminorm: no start points");
    if (obs.n_avg < 1) throw ArgumentError("seminorm: N must be >= 1");
    long long h = effective_h(obs.n_avg, obs.h_budget, s);
    if (obs.n_avg < h) throw ArgumentError("seminorm: need N >= H");
    long long need = obs.n_avg + (s >= 2 ? (s - 1) * h : 0);
    std::vector<cvec> samples;
    samples.reserve(obs.starts.size());
    for (const auto& st : obs.starts)
        samples.push_back(materialize(obs.sys, st, obs.f, need));
    return seminorm_samples(samples, obs.n_avg, h, s);
}

// ---------------------------------------------------------------------------
// The finite averaging inequality

VdcReport vdc_inequality(const std::vector<cvec>& vectors,
                         const std::vector<std::complex<double>>& weights) {
    const std::size_t n = vectors.size();
    if (n < 1) throw ArgumentError("vdc_inequality: need at least one vector");
    if (weights.size() != n) throw ArgumentError("vdc_inequality: weight count mismatch");
    const std::size_t dim = vectors.front().size();
    if (dim < 1) throw ArgumentError("vdc_inequality: dimension must be >= 1");
    for (const auto& v : vectors)
        if (v.size() != dim) throw ArgumentError("vdc_inequality: dimension mismatch");

    // lhs: ||(1/n) sum b_i v_i||^2 under the uniform measure on coordinates
    KahanReal lhs_acc;
    for (std::size_t j = 0; j < dim; ++j) {
        KahanComplex s;
        for (std::size_t i = 0; i < n; ++i) s.add(weights[i] * vectors[i][j]);
        lhs_acc.add(std::norm(s.sum / static_cast<double>(n)));
    }
    double lhs = lhs_acc.sum / static_cast<double>(dim);

    // rhs: ||b||_inf^2 * ||(1/n) sum v_i (x) conj(v_i)||_{L2(tau x tau)}
    double binf = 0.0;
    for (const auto& w : weights) binf = std::max(binf, std::abs(w));
    KahanReal tensor_acc;
    for (std::size_t j = 0; j < dim; ++j) {
        for (std::size_t l = 0; l < dim; ++l) {
            KahanComplex s;
            for (std::size_t i = 0; i < n; ++i)
                s.add(vectors[i][j] * std::conj(vectors[i][l]));
            tensor_acc.add(std::norm(s.sum / static_cast<double>(n)));
        }
    }
    double tensor = std::sqrt(tensor_acc.sum / static_cast<double>(dim * dim));

    VdcReport rep;
    rep.lhs = lhs;
    rep.rhs = binf * binf * tensor;
    rep.pass = rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

FolnerSplitReport folner_split(const std::vector<std::complex<double>>& values, int c) {
    if (c < 1) throw ArgumentError("folner_split: c must be >= 1");
    if (values.empty()) throw ArgumentError("folner_split: empty window");
    const std::size_t len = values.size();

    FolnerSplitReport rep;
    rep.lhs = std::abs(kern::sum(values.data(), len) / static_cast<double>(len));

    double sup = 0.0;
    for (const auto& v : values) sup = std::max(sup, std::abs(v));

    KahanReal rhs;
    for (int j = 0; j < c; ++j) {
        KahanComplex s;
        std::size_t cnt = 0;
        for (std::size_t i = static_cast<std::size_t>(j); i < len;
             i += static_cast<std::size_t>(c)) {
            s.add(values[i]);
            ++cnt;
        }
        if (cnt > 0) rhs.add(std::abs(s.sum / static_cast<double>(cnt)));
    }
    rep.rhs = rhs.sum / static_cast<double>(c);
    rep.slack = 2.0 * sup * static_cast<double>(c) / static_cast<double>(len);
    rep.pass = rep.lhs <= rep.rhs + rep.slack;
    return rep;
}

// ---------------------------------------------------------------------------
// Seminorm comparisons

RescalingReport check_power_rescaling(const DynamicalSystem& sys, const StatePoint& start,
                                      const Observable& f, int k, int c, long long n_avg,
                                      long long h_budget, double slack) {
    if (c < 1) throw ArgumentError("check_power_rescaling: c must be >= 1");
    long long h = effective_h(n_avg, h_budget, k);
    long long need = n_avg + (k >= 2 ? (k - 1) * h : 0);

    cvec along_t = materialize(sys, start, f, need);
    // subsample the orbit under T^c
    cvec along_tc(static_cast<std::size_t>(need));
    {
        cvec full = materialize(sys, start, f, need * c);
        for (long long i = 1; i <= need; ++i)
            along_tc[static_cast<std::size_t>(i - 1)] =
                full[static_cast<std::size_t>(i * c - 1)];
    }

    RescalingReport rep;
    rep.norm_t = seminorm_samples({along_t}, n_avg, h, k).value;
    rep.norm_tc = seminorm_samples({along_tc}, n_avg, h, k).value;
    rep.bound = std::pow(static_cast<double>(c),
                         static_cast<double>(k) / std::ldexp(1.0, k)) *
                rep.norm_t;
    rep.pass_lower = rep.norm_t <= rep.norm_tc + slack;
    rep.pass_upper = k < 2 || rep.norm_tc <= rep.bound + slack;
    return rep;
}

ProductBoundReport check_product_bound(const DynamicalSystem& sys, const StatePoint& start,
                                       const Observable& f, int k, long long n_avg,
                                       long long h_budget, int pair_count, std::uint64_t seed,
                                       double slack) {
    long long h = effective_h(n_avg, h_budget, k + 1);
    long long need = n_avg + static_cast<long long>(k) * h;

    cvec base = materialize(sys, start, f, need);

    // diagonal pair trajectories with independent second starts
    Rng rng(seed);
    std::vector<cvec> pair_samples;
    pair_samples.reserve(static_cast<std::size_t>(pair_count));
    for (int j = 0; j < pair_count; ++j) {
        std::vector<double> coords(static_cast<std::size_t>(sys.dimension()));
        for (auto& x : coords) x = rng.uniform01();
        cvec other = materialize(sys, sys.make_point(coords), f, need);
        cvec prod(static_cast<std::size_t>(need));
        kern::mul_conj(base.data(), other.data(), prod.data(), static_cast<std::size_t>(need));
        pair_samples.push_back(std::move(prod));
    }

    ProductBoundReport rep;
    rep.lhs = seminorm_samples(pair_samples, n_avg, h, k).value;
    double u_next = seminorm_samples({base}, n_avg, h, k + 1).value;
    rep.rhs = u_next * u_next;
    rep.pass = rep.lhs <= rep.rhs + slack;
    return rep;
}

DecayReport multilinear_uniformity_decay(const DynamicalSystem& sys,
                                         const std::vector<Observable>& f,
                                         const std::vector<int>& exponents, long long n_avg,
                                         int cloud, std::uint64_t seed) {
    const auto k = static_cast<int>(f.size());
    if (k < 1 || exponents.size() != f.size())
        throw ArgumentError("multilinear_uniformity_decay: need matching f_i and c_i");

    Rng rng(seed);
    std::vector<StatePoint> starts;
    for (int j = 0; j < cloud; ++j) {
        std::vector<double> coords(static_cast<std::size_t>(sys.dimension()));
        for (auto& x : coords) x = rng.uniform01();
        starts.push_back(sys.make_point(coords));
    }

    DecayReport rep;
    for (long long len : {n_avg / 100, n_avg / 10, n_avg}) {
        if (len < 1) continue;
        KahanReal l2;
        for (const auto& st : starts) {
            KahanComplex acc;
            for (long long n = 1; n <= len; ++n) {
                std::complex<double> prod{1.0, 0.0};
                for (int i = 0; i < k; ++i) {
                    StatePoint p = sys.apply(st, static_cast<long long>(exponents[
                                                     static_cast<std::size_t>(i)]) * n);
                    prod *= std::holds_alternative<TrigPoly>(f[static_cast<std::size_t>(i)])
                                ? std::get<TrigPoly>(f[static_cast<std::size_t>(i)]).eval(p)
                                : std::get<GenericObservable>(f[static_cast<std::size_t>(i)])(p);
                }
                acc.add(prod);
            }
            l2.add(std::norm(acc.sum / static_cast<double>(len)));
        }
        rep.lengths.push_back(len);
        rep.l2_values.push_back(std::sqrt(l2.sum / static_cast<double>(cloud)));
    }

    double min_norm = 1e300;
    for (int i = 0; i < k; ++i) {
        TrajectoryObservable obs{sys, {starts.front()}, f[static_cast<std::size_t>(i)],
                                 std::min<long long>(n_avg, 100'000), 0};
        min_norm = std::min(min_norm, seminorm_trajectory(obs, k).value);
    }
    rep.min_seminorm = min_norm;
    return rep;
}

} // namespace sumdyn
