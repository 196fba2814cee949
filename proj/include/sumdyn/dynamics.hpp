#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "sumdyn/errors.hpp"
#include "sumdyn/numeric.hpp"

namespace sumdyn {

enum class SystemKind { circle_rotation, torus_rotation, skew_product, symbolic_shift };

std::string kind_name(SystemKind k);

// A finite window of a one-sided 0/1 sequence. Symbols are 1-indexed;
// applying T^n moves the view n symbols to the right. Reads past the stored
// window raise HorizonError rather than fabricating symbols.
struct SymbolicWindow {
    std::shared_ptr<const std::vector<std::uint8_t>> bits;
    long long shift = 0;

    long long valid_length() const {
        return static_cast<long long>(bits->size()) - shift;
    }
    int symbol(long long k) const { // 1-based index into the shifted view
        long long idx = k + shift;
        if (k < 1 || idx < 1 || idx > static_cast<long long>(bits->size()))
            throw HorizonError("symbolic window: symbol index " + std::to_string(k) +
                               " out of the stored range");
        return (*bits)[static_cast<std::size_t>(idx - 1)];
    }
};

// A point of a system: torus coordinates in [0,1) or a symbolic window.
struct StatePoint {
    std::vector<double> coords;
    std::optional<SymbolicWindow> sym;

    bool is_symbolic() const { return sym.has_value(); }
    static StatePoint torus(std::vector<double> c) { return {std::move(c), std::nullopt}; }
};

struct FolnerWindow {
    std::uint64_t start = 1;  // M+1
    std::uint64_t length = 1; // N
};

class DynamicalSystem;

// Conjunction of shifted-ball constraints, optionally a finite union of such
// conjunctions. A constraint (s, B(c, r)) holds at x when d(T^s x, c) < r.
struct BallConstraint {
    long long shift = 0;
    StatePoint center;
    double radius = 0.0;
};

struct OpenRegion {
    std::vector<std::vector<BallConstraint>> disjuncts; // member: any disjunct, all constraints

    static OpenRegion ball(StatePoint center, double radius, long long shift = 0);
    bool single_conjunction() const { return disjuncts.size() == 1; }
    const std::vector<BallConstraint>& constraints() const; // requires single conjunction
    // The region T^{-b} this  (membership of x tested via T^b x).
    OpenRegion preimage(long long b) const;
    // Conjunction with another single-conjunction region.
    OpenRegion intersect(const OpenRegion& other) const;
    std::size_t constraint_count() const;
};

class DynamicalSystem {
public:
    static DynamicalSystem circle(double alpha);
    static DynamicalSystem torus(std::vector<double> alphas);
    static DynamicalSystem skew(double alpha);
    static DynamicalSystem symbolic(std::vector<std::uint8_t> bits);

    SystemKind kind() const { return kind_; }
    const std::vector<double>& alphas() const { return alphas_; }
    double alpha() const { return alphas_.at(0); }
    int dimension() const; // torus coordinate count (0 for symbolic)

    // Canonical start point: 0 on tori, the stored generator for symbolic.
    StatePoint origin() const;
    StatePoint make_point(std::vector<double> coords) const;

    // T^n x by closed form; O(1) for the torus kinds at any |n| <= 3e9.
    StatePoint apply(const StatePoint& x, long long n) const;

    double distance(const StatePoint& x, const StatePoint& y) const;

    bool member(const OpenRegion& r, const StatePoint& x) const;
    // Largest slack of x inside the region (max over disjuncts of min over
    // constraints of radius - distance); negative when outside.
    double margin(const OpenRegion& r, const StatePoint& x) const;

    // Explicit pronilfactor data at level s: the factor system, the factor
    // map, and whether the map is the identity. Rotations are their own
    // factors at every level; the skew product factors onto its base circle
    // at s = 1 and onto itself for s >= 2. Symbolic systems carry none.
    struct Factor {
        std::shared_ptr<DynamicalSystem> target;
        std::function<StatePoint(const StatePoint&)> map;
        bool identity = false;
    };
    std::optional<Factor> pronilfactor(int s) const;

    nlohmann::json descriptor() const;
    static DynamicalSystem from_descriptor(const nlohmann::json& j);

private:
    DynamicalSystem() = default;
    SystemKind kind_ = SystemKind::circle_rotation;
    std::vector<double> alphas_;
    std::shared_ptr<const std::vector<std::uint8_t>> bits_;
};

// Trigonometric polynomial observable: sum of coeff * e(2 pi i <freq, x>)
// over the flattened coordinates it is evaluated on.
struct TrigTerm {
    std::complex<double> coeff;
    std::vector<long long> freq;
};

struct TrigPoly {
    std::string name;
    std::vector<TrigTerm> terms;

    static TrigPoly character(std::vector<long long> freq, std::complex<double> coeff = 1.0,
                              std::string name = "");
    static TrigPoly constant(std::complex<double> c);

    std::complex<double> eval_coords(const double* coords, std::size_t n) const;
    std::complex<double> eval(const StatePoint& x) const;
    // Upper bound on the sup norm (sum of coefficient moduli; exact for a
    // single term).
    double sup_bound() const;
};

using GenericObservable = std::function<std::complex<double>(const StatePoint&)>;
using Observable = std::variant<TrigPoly, GenericObservable>;

// (1/N) sum_{n=M+1}^{M+N} f(T^n x), compensated summation throughout.
// Trigonometric observables on torus kinds run on closed-form phase streams.
std::complex<double> birkhoff_average(const DynamicalSystem& sys, const StatePoint& x,
                                      const Observable& f, const FolnerWindow& window);

// Linear/quadratic phase coefficients of one trig term along the orbit of x:
// <freq, coords(T^n x)> = p0 + n p1 + n^2 p2 (mod 1). Torus kinds only.
struct OrbitPhase {
    double p0 = 0, p1 = 0, p2 = 0;
};
OrbitPhase orbit_phase(const DynamicalSystem& sys, const StatePoint& x,
                       const std::vector<long long>& freq);

} // namespace sumdyn
