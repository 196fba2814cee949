#include "sumdyn/sets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sumdyn/dynamics.hpp"
#include "sumdyn/numeric.hpp"
#include "sumdyn/rng.hpp"

namespace sumdyn {

// ---------------------------------------------------------------------------
// NaturalSet

NaturalSet::NaturalSet(std::uint64_t horizon, std::string descriptor)
    : horizon_(horizon), descriptor_(std::move(descriptor)) {
    if (horizon_ < 1) throw ArgumentError("NaturalSet: horizon must be >= 1");
    words_.assign((horizon_ + 63) / 64, 0);
}

void NaturalSet::insert(std::uint64_t n) {
    if (n < 1 || n > horizon_) throw HorizonError("insert outside horizon");
    words_[(n - 1) >> 6] |= 1ULL << ((n - 1) & 63);
}

void NaturalSet::erase(std::uint64_t n) {
    if (n < 1 || n > horizon_) throw HorizonError("erase outside horizon");
    words_[(n - 1) >> 6] &= ~(1ULL << ((n - 1) & 63));
}

std::uint64_t NaturalSet::count_range(std::uint64_t start, std::uint64_t length) const {
    if (length == 0) return 0;
    if (start < 1 || start + length - 1 > horizon_)
        throw HorizonError("count_range window [" + std::to_string(start) + "," +
                           std::to_string(start + length - 1) + "] outside horizon " +
                           std::to_string(horizon_));
    std::uint64_t lo = start - 1, hi = start - 1 + length; // zero-based [lo, hi)
    std::uint64_t w0 = lo >> 6, w1 = (hi - 1) >> 6;
    std::uint64_t total = 0;
    for (std::uint64_t w = w0; w <= w1; ++w) {
        std::uint64_t word = words_[w];
        if (w == w0) word &= ~0ULL << (lo & 63);
        if (w == w1 && ((hi & 63) != 0)) word &= ~0ULL >> (64 - (hi & 63));
        total += static_cast<std::uint64_t>(std::popcount(word));
    }
    return total;
}

std::vector<std::uint64_t> NaturalSet::elements() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 1; n <= horizon_; ++n)
        if ((words_[(n - 1) >> 6] >> ((n - 1) & 63)) & 1ULL) out.push_back(n);
    return out;
}

// ---------------------------------------------------------------------------
// Generators

std::string GeneratorSpec::canonical() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case Kind::odds: os << "odds"; break;
        case Kind::evens: os << "evens"; break;
        case Kind::full: os << "full"; break;
        case Kind::congruence: os << "congruence:" << residue << "," << modulus; break;
        case Kind::bernoulli: os << "bernoulli:" << p << "," << seed; break;
        case Kind::bohr: os << "bohr:" << alpha << "," << lo << "," << hi; break;
        case Kind::straus: os << "straus:" << eps << "," << seed; break;
        case Kind::file: os << "file:" << path; break;
    }
    os << "(horizon=" << horizon << ")";
    return os.str();
}

namespace {

std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_angle(const std::string& s) {
    if (s == "golden") return golden_ratio_frac();
    return std::stod(s);
}

} // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text, std::uint64_t horizon) {
    GeneratorSpec g;
    g.horizon = horizon;
    auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (name == "odds") {
            g.kind = Kind::odds;
        } else if (name == "evens") {
            g.kind = Kind::evens;
        } else if (name == "full") {
            g.kind = Kind::full;
        } else if (name == "congruence") {
            auto a = split_args(rest);
            if (a.size() != 2) throw ArgumentError("congruence needs r,m");
            g.kind = Kind::congruence;
            g.residue = std::stoull(a[0]);
            g.modulus = std::stoull(a[1]);
        } else if (name == "bernoulli") {
            auto a = split_args(rest);
            if (a.size() != 2) throw ArgumentError("bernoulli needs p,seed");
            g.kind = Kind::bernoulli;
            g.p = std::stod(a[0]);
            g.seed = std::stoull(a[1]);
        } else if (name == "bohr") {
            auto a = split_args(rest);
            if (a.size() != 3) throw ArgumentError("bohr needs alpha,lo,hi");
            g.kind = Kind::bohr;
            g.alpha = parse_angle(a[0]);
            g.lo = std::stod(a[1]);
            g.hi = std::stod(a[2]);
        } else if (name == "straus") {
            auto a = split_args(rest);
            if (a.size() != 2) throw ArgumentError("straus needs eps,seed");
            g.kind = Kind::straus;
            g.eps = std::stod(a[0]);
            g.seed = std::stoull(a[1]);
        } else if (name == "file") {
            g.kind = Kind::file;
            g.path = rest;
        } else {
            throw ArgumentError("unknown set generator: " + name);
        }
    } catch (const std::invalid_argument&) {
        throw ArgumentError("malformed generator arguments: " + text);
    } catch (const std::out_of_range&) {
        throw ArgumentError("generator argument out of range: " + text);
    }
    return g;
}

NaturalSet generate_set(const GeneratorSpec& spec) {
    using K = GeneratorSpec::Kind;
    if (spec.kind == K::file) return load_set_file(spec.path, spec.horizon);
    if (spec.horizon < 1) throw ArgumentError("generator horizon must be >= 1");

    NaturalSet a(spec.horizon, spec.canonical());
    switch (spec.kind) {
        case K::odds:
            for (std::uint64_t n = 1; n <= spec.horizon; n += 2) a.insert(n);
            break;
        case K::evens:
            for (std::uint64_t n = 2; n <= spec.horizon; n += 2) a.insert(n);
            break;
        case K::full:
            for (std::uint64_t n = 1; n <= spec.horizon; ++n) a.insert(n);
            break;
        case K::congruence: {
            if (spec.modulus < 1) throw ArgumentError("congruence modulus must be >= 1");
            std::uint64_t r = spec.residue % spec.modulus;
            std::uint64_t first = r == 0 ? spec.modulus : r;
            for (std::uint64_t n = first; n <= spec.horizon; n += spec.modulus) a.insert(n);
            break;
        }
        case K::bernoulli: {
            if (!(spec.p >= 0.0 && spec.p <= 1.0))
                throw ArgumentError("bernoulli p must lie in [0,1]");
            Rng rng(spec.seed);
            for (std::uint64_t n = 1; n <= spec.horizon; ++n)
                if (rng.uniform01() < spec.p) a.insert(n);
            break;
        }
        case K::bohr: {
            if (!(spec.lo >= 0.0 && spec.hi <= 1.0 && spec.lo < spec.hi))
                throw ArgumentError("bohr interval must satisfy 0 <= lo < hi <= 1");
            for (std::uint64_t n = 1; n <= spec.horizon; ++n) {
                double f = frac_mul(static_cast<long long>(n), spec.alpha);
                if (f >= spec.lo && f < spec.hi) a.insert(n);
            }
            break;
        }
        case K::straus: {
            // Start from all of {1..horizon}; remove residue classes
            // r_j mod m_j with m_j = ceil(2^j / eps) while m_j fits the
            // horizon. Illustrative generator only.
            if (!(spec.eps > 0.0 && spec.eps < 1.0))
                throw ArgumentError("straus eps must lie in (0,1)");
            for (std::uint64_t n = 1; n <= spec.horizon; ++n) a.insert(n);
            Rng rng(spec.seed);
            for (int j = 1; j < 62; ++j) {
                double mj_real = std::ceil(std::ldexp(1.0, j) / spec.eps);
                if (mj_real > static_cast<double>(spec.horizon)) break;
                auto mj = static_cast<std::uint64_t>(mj_real);
                std::uint64_t rj = rng.below(mj);
                std::uint64_t first = rj == 0 ? mj : rj;
                for (std::uint64_t n = first; n <= spec.horizon; n += mj) a.erase(n);
            }
            break;
        }
        case K::file:
            break;
    }
    return a;
}

NaturalSet load_set_file(const std::string& path, std::uint64_t default_horizon) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot read set file: " + path);
    std::uint64_t horizon = default_horizon;
    std::vector<std::uint64_t> elems;
    std::string line;
    std::uint64_t prev = 0;
    bool first_line = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            auto pos = line.find("horizon=");
            if (first_line && pos != std::string::npos)
                horizon = std::stoull(line.substr(pos + 8));
            first_line = false;
            continue;
        }
        first_line = false;
        std::uint64_t v;
        try {
            v = std::stoull(line);
        } catch (...) {
            throw ArgumentError("set file " + path + ": bad line '" + line + "'");
        }
        if (v < 1) throw ArgumentError("set file " + path + ": entries must be >= 1");
        if (v <= prev)
            throw ArgumentError("set file " + path + ": entries must be strictly increasing");
        prev = v;
        elems.push_back(v);
    }
    if (horizon == 0) horizon = elems.empty() ? 1 : elems.back();
    if (!elems.empty() && elems.back() > horizon)
        throw ArgumentError("set file " + path + ": entry beyond declared horizon");
    NaturalSet a(horizon, "file:" + path + "(horizon=" + std::to_string(horizon) + ")");
    for (auto v : elems) a.insert(v);
    return a;
}

void save_set_file(const NaturalSet& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ArgumentError("cannot write set file: " + path);
    out << "# horizon=" << a.horizon() << "\n";
    for (std::uint64_t n = 1; n <= a.horizon(); ++n)
        if (a.contains(n)) out << n << "\n";
}

// ---------------------------------------------------------------------------
// Densities

std::vector<Rational> density_along(const NaturalSet& a,
                                    const std::vector<FolnerWindow>& windows) {
    std::vector<Rational> out;
    out.reserve(windows.size());
    for (const auto& w : windows) {
        std::uint64_t c = a.count_range(w.start, w.length); // throws HorizonError when outside
        out.emplace_back(static_cast<std::int64_t>(c), static_cast<std::int64_t>(w.length));
    }
    return out;
}

Rational upper_banach_density_estimate(const NaturalSet& a,
                                       const std::vector<std::uint64_t>& window_lengths) {
    if (window_lengths.empty())
        throw ArgumentError("upper_banach_density_estimate: no window lengths given");
    Rational best(0, 1);
    for (auto len : window_lengths) {
        if (len < 1 || len > a.horizon())
            throw HorizonError("window length " + std::to_string(len) + " outside horizon");
        // slide: incremental count update over all placements
        std::uint64_t count = a.count_range(1, len);
        std::uint64_t best_count = count;
        for (std::uint64_t start = 2; start + len - 1 <= a.horizon(); ++start) {
            count -= a.contains(start - 1) ? 1 : 0;
            count += a.contains(start + len - 2 + 1) ? 1 : 0;
            if (count > best_count) best_count = count;
        }
        Rational r(static_cast<std::int64_t>(best_count), static_cast<std::int64_t>(len));
        if (best < r) best = r;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Certificates

std::uint64_t subset_count_capped(std::size_t m, int k) {
    constexpr std::uint64_t kCap = 1'000'000;
    std::uint64_t total = 0;
    // sum_{j<=k} C(m, j), bailing out past the cap
    std::uint64_t binom = 1;
    for (int j = 1; j <= k && j <= static_cast<int>(m); ++j) {
        binom = binom * (m - static_cast<std::size_t>(j) + 1) / static_cast<std::uint64_t>(j);
        total += binom;
        if (total > kCap)
            throw ArgumentError("subset enumeration beyond the exactness cap of 1e6");
    }
    return total;
}

void SumsetCertificate::validate() const {
    if (depth < 1) throw ArgumentError("certificate: depth k must be >= 1");
    if (generators.empty()) throw ArgumentError("certificate: B must be nonempty");
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (generators[i] < 1) throw ArgumentError("certificate: B entries must be >= 1");
        if (i > 0 && generators[i] <= generators[i - 1])
            throw ArgumentError("certificate: B must be strictly increasing");
    }
    // worst-case sum: the k largest elements plus the shift
    std::uint64_t worst = t;
    std::size_t m = generators.size();
    for (std::size_t i = 0; i < std::min<std::size_t>(m, static_cast<std::size_t>(depth)); ++i)
        worst += generators[m - 1 - i];
    if (worst > horizon)
        throw ArgumentError("certificate: subset sums exceed the horizon");
}

nlohmann::json SumsetCertificate::to_json() const {
    nlohmann::json j;
    j["t"] = t;
    j["B"] = generators;
    j["k"] = depth;
    j["horizon"] = horizon;
    j["set_descriptor"] = set_descriptor;
    return j;
}

SumsetCertificate SumsetCertificate::from_json(const nlohmann::json& j) {
    SumsetCertificate c;
    c.t = j.at("t").get<std::uint64_t>();
    c.generators = j.at("B").get<std::vector<std::uint64_t>>();
    c.depth = j.at("k").get<int>();
    c.horizon = j.at("horizon").get<std::uint64_t>();
    c.set_descriptor = j.value("set_descriptor", "");
    c.validate();
    return c;
}

namespace {

// Visits nonempty subsets of {0,...,m-1} of size <= k in ascending size,
// lexicographic within size. Visitor gets the index list; returns false to
// stop.
template <class Visit>
void for_each_subset(std::size_t m, int k, Visit&& visit) {
    std::vector<std::size_t> idx;
    for (int size = 1; size <= k && size <= static_cast<int>(m); ++size) {
        idx.assign(static_cast<std::size_t>(size), 0);
        for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
        while (true) {
            if (!visit(idx)) return;
            // next combination
            int i = size - 1;
            while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                                 m - static_cast<std::size_t>(size - i)) --i;
            if (i < 0) break;
            ++idx[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

} // namespace

CertificateReport verify_certificate(const NaturalSet& a, const SumsetCertificate& cert) {
    cert.validate();
    if (cert.horizon > a.horizon())
        throw HorizonError("certificate horizon exceeds the set's horizon");
    subset_count_capped(cert.generators.size(), cert.depth);

    CertificateReport rep;
    rep.pass = true;
    for_each_subset(cert.generators.size(), cert.depth, [&](const std::vector<std::size_t>& idx) {
        std::uint64_t s = cert.t;
        for (auto i : idx) s += cert.generators[i];
        ++rep.subsets_checked;
        if (!a.contains(s)) { // throws HorizonError if s > horizon of a
            rep.pass = false;
            std::vector<std::uint64_t> subset;
            for (auto i : idx) subset.push_back(cert.generators[i]);
            rep.first_failing_subset = std::move(subset);
            rep.first_failing_sum = s;
            return false;
        }
        return true;
    });
    return rep;
}

// ---------------------------------------------------------------------------
// Search

namespace {

struct DfsState {
    const NaturalSet* a;
    int k;
    std::uint64_t t;
    std::size_t target;
    std::uint64_t node_limit;
    std::uint64_t nodes = 0;
    bool exhausted = false;
    std::vector<std::uint64_t> b;
};

// All sums of b with <= k-1 existing elements must stay in A - t.
bool extension_ok(DfsState& st, std::uint64_t b) {
    bool ok = true;
    std::uint64_t singleton = st.t + b;
    if (singleton > st.a->horizon() || !st.a->contains(singleton)) return false;
    if (st.k > 1 && !st.b.empty()) {
        for_each_subset(st.b.size(), st.k - 1, [&](const std::vector<std::size_t>& idx) {
            std::uint64_t s = st.t + b;
            for (auto i : idx) s += st.b[i];
            if (s > st.a->horizon() || !st.a->contains(s)) {
                ok = false;
                return false;
            }
            return true;
        });
    }
    return ok;
}

bool dfs(DfsState& st, std::vector<std::uint64_t>& best_partial) {
    if (st.b.size() == st.target) return true;
    std::uint64_t start = st.b.empty() ? 1 : st.b.back() + 1;
    // sum of the k-1 largest current elements; adding b keeps all depth-k
    // sums within horizon iff that plus b plus t fits
    std::uint64_t tail = st.t;
    std::size_t m = st.b.size();
    for (std::size_t i = 0; i < std::min<std::size_t>(m, static_cast<std::size_t>(st.k - 1)); ++i)
        tail += st.b[m - 1 - i];
    for (std::uint64_t b = start; tail + b <= st.a->horizon(); ++b) {
        if (st.nodes >= st.node_limit) {
            st.exhausted = true;
            return false;
        }
        ++st.nodes;
        if (!extension_ok(st, b)) continue;
        st.b.push_back(b);
        if (st.b.size() > best_partial.size()) best_partial = st.b;
        if (dfs(st, best_partial)) return true;
        st.b.pop_back();
        if (st.exhausted) return false;
    }
    return false;
}

} // namespace

SearchResult find_configuration(const NaturalSet& a, int k, const SearchBudget& budget) {
    if (k < 1) throw ArgumentError("find_configuration: k must be >= 1");
    if (budget.target_size < 1) throw ArgumentError("find_configuration: target size must be >= 1");
    SearchResult res;
    std::vector<std::uint64_t> best_partial;
    std::uint64_t best_partial_t = 0;

    for (std::uint64_t t = 0; t <= budget.t_max; ++t) {
        DfsState st{&a, k, t, budget.target_size, budget.node_limit, 0, false, {}};
        std::vector<std::uint64_t> partial;
        bool found = dfs(st, partial);
        res.nodes_used += st.nodes;
        if (st.exhausted) res.budget_exhausted = true;
        if (partial.size() > best_partial.size()) {
            best_partial = partial;
            best_partial_t = t;
        }
        if (found) {
            SumsetCertificate cert;
            cert.t = t;
            cert.generators = st.b;
            cert.depth = k;
            cert.horizon = a.horizon();
            cert.set_descriptor = a.descriptor();
            cert.validate();
            res.certificate = std::move(cert);
            return res;
        }
    }
    if (!best_partial.empty()) {
        SumsetCertificate part;
        part.t = best_partial_t;
        part.generators = best_partial;
        part.depth = k;
        part.horizon = a.horizon();
        part.set_descriptor = a.descriptor();
        res.best_partial = std::move(part);
    }
    return res;
}

} // namespace sumdyn
