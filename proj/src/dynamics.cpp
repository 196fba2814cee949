#include "sumdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "sumdyn/chunked.hpp"
#include "sumdyn/kernels.hpp"

namespace sumdyn {

namespace {
constexpr long long kMaxExponent = 3'000'000'000LL; // keeps n^2 inside int64
}

std::string kind_name(SystemKind k) {
    switch (k) {
        case SystemKind::circle_rotation: return "circle_rotation";
        case SystemKind::torus_rotation: return "torus_rotation";
        case SystemKind::skew_product: return "skew_product";
        case SystemKind::symbolic_shift: return "symbolic_shift";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// OpenRegion

OpenRegion OpenRegion::ball(StatePoint center, double radius, long long shift) {
    if (radius <= 0.0) throw ArgumentError("OpenRegion: radius must be positive");
    OpenRegion r;
    r.disjuncts.push_back({BallConstraint{shift, std::move(center), radius}});
    return r;
}

const std::vector<BallConstraint>& OpenRegion::constraints() const {
    if (!single_conjunction())
        throw ArgumentError("OpenRegion: operation requires a single conjunction");
    return disjuncts.front();
}

OpenRegion OpenRegion::preimage(long long b) const {
    OpenRegion out;
    out.disjuncts.reserve(disjuncts.size());
    for (const auto& conj : disjuncts) {
        std::vector<BallConstraint> shifted = conj;
        for (auto& c : shifted) c.shift += b;
        out.disjuncts.push_back(std::move(shifted));
    }
    return out;
}

OpenRegion OpenRegion::intersect(const OpenRegion& other) const {
    if (!single_conjunction() || !other.single_conjunction())
        throw ArgumentError("OpenRegion: intersect requires single conjunctions");
    OpenRegion out = *this;
    auto& conj = out.disjuncts.front();
    conj.insert(conj.end(), other.disjuncts.front().begin(), other.disjuncts.front().end());
    return out;
}

std::size_t OpenRegion::constraint_count() const {
    std::size_t n = 0;
    for (const auto& c : disjuncts) n += c.size();
    return n;
}

// ---------------------------------------------------------------------------
// DynamicalSystem

DynamicalSystem DynamicalSystem::circle(double alpha) {
    DynamicalSystem s;
    s.kind_ = SystemKind::circle_rotation;
    s.alphas_ = {frac_unit(alpha)};
    return s;
}

DynamicalSystem DynamicalSystem::torus(std::vector<double> alphas) {
    if (alphas.empty()) throw ArgumentError("torus rotation needs at least one angle");
    DynamicalSystem s;
    s.kind_ = SystemKind::torus_rotation;
    for (auto& a : alphas) a = frac_unit(a);
    s.alphas_ = std::move(alphas);
    return s;
}

DynamicalSystem DynamicalSystem::skew(double alpha) {
    DynamicalSystem s;
    s.kind_ = SystemKind::skew_product;
    s.alphas_ = {frac_unit(alpha)};
    return s;
}

DynamicalSystem DynamicalSystem::symbolic(std::vector<std::uint8_t> bits) {
    if (bits.size() < 2) throw ArgumentError("symbolic shift needs a window of length >= 2");
    DynamicalSystem s;
    s.kind_ = SystemKind::symbolic_shift;
    s.bits_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(bits));
    return s;
}

int DynamicalSystem::dimension() const {
    switch (kind_) {
        case SystemKind::circle_rotation: return 1;
        case SystemKind::torus_rotation: return static_cast<int>(alphas_.size());
        case SystemKind::skew_product: return 2;
        case SystemKind::symbolic_shift: return 0;
    }
    return 0;
}

StatePoint DynamicalSystem::origin() const {
    if (kind_ == SystemKind::symbolic_shift) {
        StatePoint p;
        p.sym = SymbolicWindow{bits_, 0};
        return p;
    }
    return StatePoint::torus(std::vector<double>(static_cast<std::size_t>(dimension()), 0.0));
}

StatePoint DynamicalSystem::make_point(std::vector<double> coords) const {
    if (kind_ == SystemKind::symbolic_shift)
        throw KindMismatchError("make_point: symbolic system has no torus coordinates");
    if (static_cast<int>(coords.size()) != dimension())
        throw ArgumentError("make_point: coordinate count mismatch");
    for (auto& c : coords) c = frac_unit(c);
    return StatePoint::torus(std::move(coords));
}

StatePoint DynamicalSystem::apply(const StatePoint& x, long long n) const {
    if (n == 0) return x;
    if (std::llabs(n) > kMaxExponent)
        throw ArgumentError("apply: |n| too large for exact closed-form iteration");
    switch (kind_) {
        case SystemKind::circle_rotation:
        case SystemKind::torus_rotation: {
            if (x.is_symbolic()) throw KindMismatchError("apply: symbolic point on torus system");
            std::vector<double> c(x.coords.size());
            for (std::size_t i = 0; i < c.size(); ++i)
                c[i] = frac_unit(x.coords[i] + frac_mul(n, alphas_[i % alphas_.size()]));
            return StatePoint::torus(std::move(c));
        }
        case SystemKind::skew_product: {
            if (x.is_symbolic() || x.coords.size() != 2)
                throw KindMismatchError("apply: skew product needs a 2-torus point");
            // T^n (x, y) = (x + n a, y + 2 n x + n^2 a)
            double nx = frac_unit(x.coords[0] + frac_mul(n, alphas_[0]));
            double ny = frac_unit(x.coords[1] + frac_mul(2 * n, x.coords[0]) +
                                  frac_mul(n * n, alphas_[0]));
            return StatePoint::torus({nx, ny});
        }
        case SystemKind::symbolic_shift: {
            if (!x.is_symbolic()) throw KindMismatchError("apply: torus point on symbolic system");
            long long ns = x.sym->shift + n;
            if (ns < 0)
                throw HorizonError("apply: symbolic shift below the stored window");
            if (ns >= static_cast<long long>(x.sym->bits->size()))
                throw HorizonError("apply: symbolic shift past the stored window");
            StatePoint p;
            p.sym = SymbolicWindow{x.sym->bits, ns};
            return p;
        }
    }
    throw ArgumentError("apply: unknown system kind");
}

double DynamicalSystem::distance(const StatePoint& x, const StatePoint& y) const {
    if (kind_ == SystemKind::symbolic_shift) {
        if (!x.is_symbolic() || !y.is_symbolic())
            throw KindMismatchError("distance: expected symbolic points");
        long long lx = x.sym->valid_length();
        long long ly = y.sym->valid_length();
        long long overlap = std::min(lx, ly);
        if (overlap < 1) throw HorizonError("distance: empty symbolic window");
        for (long long k = 1; k <= overlap; ++k) {
            if (x.sym->symbol(k) != y.sym->symbol(k))
                return std::ldexp(1.0, static_cast<int>(-std::min(k, 1000LL)));
        }
        // indistinguishable on the stored overlap
        return std::ldexp(1.0, static_cast<int>(-std::min(overlap + 1, 1000LL)));
    }
    if (x.is_symbolic() || y.is_symbolic())
        throw KindMismatchError("distance: symbolic point on torus system");
    if (x.coords.size() != y.coords.size())
        throw KindMismatchError("distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        d = std::max(d, circle_dist(x.coords[i], y.coords[i]));
    return d;
}

bool DynamicalSystem::member(const OpenRegion& r, const StatePoint& x) const {
    for (const auto& conj : r.disjuncts) {
        bool all = true;
        for (const auto& c : conj) {
            if (!(distance(apply(x, c.shift), c.center) < c.radius)) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

double DynamicalSystem::margin(const OpenRegion& r, const StatePoint& x) const {
    double best = -1e300;
    for (const auto& conj : r.disjuncts) {
        double m = 1e300;
        for (const auto& c : conj)
            m = std::min(m, c.radius - distance(apply(x, c.shift), c.center));
        best = std::max(best, m);
    }
    return best;
}

std::optional<DynamicalSystem::Factor> DynamicalSystem::pronilfactor(int s) const {
    if (s < 1) throw ArgumentError("pronilfactor: level must be >= 1");
    switch (kind_) {
        case SystemKind::circle_rotation:
        case SystemKind::torus_rotation: {
            Factor f;
            f.target = std::make_shared<DynamicalSystem>(*this);
            f.map = [](const StatePoint& p) { return p; };
            f.identity = true;
            return f;
        }
        case SystemKind::skew_product: {
            Factor f;
            if (s == 1) {
                f.target = std::make_shared<DynamicalSystem>(circle(alphas_[0]));
                f.map = [](const StatePoint& p) {
                    return StatePoint::torus({p.coords.at(0)});
                };
                f.identity = false;
            } else {
                f.target = std::make_shared<DynamicalSystem>(*this);
                f.map = [](const StatePoint& p) { return p; };
                f.identity = true;
            }
            return f;
        }
        case SystemKind::symbolic_shift:
            return std::nullopt;
    }
    return std::nullopt;
}

nlohmann::json DynamicalSystem::descriptor() const {
    nlohmann::json j;
    j["kind"] = kind_name(kind_);
    switch (kind_) {
        case SystemKind::circle_rotation:
        case SystemKind::skew_product:
            j["alpha"] = alphas_[0];
            break;
        case SystemKind::torus_rotation:
            j["alphas"] = alphas_;
            break;
        case SystemKind::symbolic_shift: {
            std::string s;
            s.reserve(bits_->size());
            for (auto b : *bits_) s.push_back(b ? '1' : '0');
            j["bits"] = s;
            break;
        }
    }
    return j;
}

DynamicalSystem DynamicalSystem::from_descriptor(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "circle_rotation") return circle(j.at("alpha").get<double>());
    if (kind == "skew_product") return skew(j.at("alpha").get<double>());
    if (kind == "torus_rotation") return torus(j.at("alphas").get<std::vector<double>>());
    if (kind == "symbolic_shift") {
        std::string s = j.at("bits").get<std::string>();
        std::vector<std::uint8_t> bits(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) bits[i] = s[i] == '1' ? 1 : 0;
        return symbolic(std::move(bits));
    }
    throw ArgumentError("unknown system kind: " + kind);
}

// ---------------------------------------------------------------------------
// Observables

TrigPoly TrigPoly::character(std::vector<long long> freq, std::complex<double> coeff,
                             std::string name) {
    TrigPoly p;
    p.name = std::move(name);
    p.terms.push_back({coeff, std::move(freq)});
    return p;
}

TrigPoly TrigPoly::constant(std::complex<double> c) {
    TrigPoly p;
    p.name = "const";
    p.terms.push_back({c, {}});
    return p;
}

std::complex<double> TrigPoly::eval_coords(const double* coords, std::size_t n) const {
    std::complex<double> v{0.0, 0.0};
    for (const auto& t : terms) {
        if (t.freq.size() > n) throw ArgumentError("TrigPoly: frequency vector too long");
        double turns = 0.0;
        for (std::size_t i = 0; i < t.freq.size(); ++i)
            turns += static_cast<double>(t.freq[i]) * coords[i];
        v += t.coeff * unit_phase(turns);
    }
    return v;
}

std::complex<double> TrigPoly::eval(const StatePoint& x) const {
    if (x.is_symbolic()) throw KindMismatchError("TrigPoly: symbolic point");
    return eval_coords(x.coords.data(), x.coords.size());
}

double TrigPoly::sup_bound() const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.coeff);
    return s;
}

// ---------------------------------------------------------------------------
// Orbit phases and Birkhoff averages

OrbitPhase orbit_phase(const DynamicalSystem& sys, const StatePoint& x,
                       const std::vector<long long>& freq) {
    OrbitPhase ph;
    switch (sys.kind()) {
        case SystemKind::circle_rotation:
        case SystemKind::torus_rotation: {
            const auto& al = sys.alphas();
            for (std::size_t i = 0; i < freq.size(); ++i) {
                ph.p0 += static_cast<double>(freq[i]) * x.coords.at(i);
                ph.p1 += static_cast<double>(freq[i]) * al[i % al.size()];
            }
            break;
        }
        case SystemKind::skew_product: {
            // coords(T^n x) = (x0 + n a, y0 + 2 n x0 + n^2 a)
            long long k1 = freq.size() > 0 ? freq[0] : 0;
            long long k2 = freq.size() > 1 ? freq[1] : 0;
            double a = sys.alpha();
            ph.p0 = static_cast<double>(k1) * x.coords.at(0) +
                    static_cast<double>(k2) * x.coords.at(1);
            ph.p1 = static_cast<double>(k1) * a +
                    2.0 * static_cast<double>(k2) * x.coords.at(0);
            ph.p2 = static_cast<double>(k2) * a;
            break;
        }
        case SystemKind::symbolic_shift:
            throw KindMismatchError("orbit_phase: symbolic system has no torus phases");
    }
    ph.p0 = frac_unit(ph.p0);
    ph.p1 = frac_unit(ph.p1);
    ph.p2 = frac_unit(ph.p2);
    return ph;
}

namespace {

struct ComplexPartial {
    KahanComplex acc;
    void merge(const ComplexPartial& o) { acc.add(o.acc.sum); }
};

} // namespace

std::complex<double> birkhoff_average(const DynamicalSystem& sys, const StatePoint& x,
                                      const Observable& f, const FolnerWindow& window) {
    if (window.length == 0) throw ArgumentError("birkhoff_average: empty window");
    const auto n0 = static_cast<long long>(window.start);
    const auto len = static_cast<std::size_t>(window.length);

    if (const auto* poly = std::get_if<TrigPoly>(&f);
        poly != nullptr && sys.kind() != SystemKind::symbolic_shift) {
        std::complex<double> total{0.0, 0.0};
        for (const auto& term : poly->terms) {
            OrbitPhase ph = orbit_phase(sys, x, term.freq);
            total += term.coeff * kern::phase_sum(len, ph.p0, ph.p1, ph.p2, n0);
        }
        return total / static_cast<double>(len);
    }

    auto partial = chunked_reduce<ComplexPartial>(
        n0, n0 + static_cast<long long>(len), [&](long long lo, long long hi) {
            ComplexPartial p;
            for (long long n = lo; n < hi; ++n) {
                StatePoint pt = sys.apply(x, n);
                std::complex<double> v = std::holds_alternative<TrigPoly>(f)
                                             ? std::get<TrigPoly>(f).eval(pt)
                                             : std::get<GenericObservable>(f)(pt);
                p.acc.add(v);
            }
            return p;
        });
    return partial.acc.sum / static_cast<double>(len);
}

} // namespace sumdyn
