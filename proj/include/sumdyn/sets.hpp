#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sumdyn/errors.hpp"
#include "sumdyn/rational.hpp"

namespace sumdyn {

struct FolnerWindow;

// Explicit subset of {1,...,horizon} with decidable membership. Queries
// beyond the horizon throw, never silently answer false.
class NaturalSet {
public:
    NaturalSet(std::uint64_t horizon, std::string descriptor);

    std::uint64_t horizon() const { return horizon_; }
    const std::string& descriptor() const { return descriptor_; }

    bool contains(std::uint64_t n) const {
        if (n < 1 || n > horizon_)
            throw HorizonError("membership query " + std::to_string(n) +
                               " outside horizon " + std::to_string(horizon_) +
                               " of " + descriptor_);
        return (words_[(n - 1) >> 6] >> ((n - 1) & 63)) & 1ULL;
    }

    void insert(std::uint64_t n);
    void erase(std::uint64_t n);

    // |A meet {start,...,start+length-1}| via word popcounts.
    std::uint64_t count_range(std::uint64_t start, std::uint64_t length) const;

    std::vector<std::uint64_t> elements() const;

private:
    std::uint64_t horizon_;
    std::string descriptor_;
    std::vector<std::uint64_t> words_;
};

// Generator descriptors. Deterministic for a fixed spec (including seeds).
struct GeneratorSpec {
    enum class Kind { odds, evens, full, congruence, bernoulli, bohr, straus, file };
    Kind kind = Kind::full;
    std::uint64_t horizon = 0;
    std::uint64_t residue = 0, modulus = 1;  // congruence(r, m)
    double p = 0.5;                          // bernoulli
    std::uint64_t seed = 0;                  // bernoulli / straus
    double alpha = 0.0, lo = 0.0, hi = 0.0;  // bohr(alpha, [lo, hi))
    double eps = 0.1;                        // straus
    std::string path;                        // file

    std::string canonical() const;
    // Parse "odds", "congruence:2,5", "bohr:golden,0,0.2", "bernoulli:0.5,7",
    // "straus:0.1,3", "file:sets/a.txt"; horizon attached separately.
    static GeneratorSpec parse(const std::string& text, std::uint64_t horizon);
};

NaturalSet generate_set(const GeneratorSpec& spec);

// Set files: UTF-8, one positive integer per line, strictly increasing,
// optional "# horizon=N" header.
NaturalSet load_set_file(const std::string& path, std::uint64_t default_horizon);
void save_set_file(const NaturalSet& a, const std::string& path);

// Exact window densities |A meet {M+1,...,M+N}| / N.
std::vector<Rational> density_along(const NaturalSet& a, const std::vector<FolnerWindow>& windows);

// Max over all placements and the given lengths of the window density.
Rational upper_banach_density_estimate(const NaturalSet& a,
                                       const std::vector<std::uint64_t>& window_lengths);

// (t, B, k, horizon): all sums of 1..k distinct elements of B, shifted by t,
// are claimed to land in the carrier set.
struct SumsetCertificate {
    std::uint64_t t = 0;
    std::vector<std::uint64_t> generators; // strictly increasing
    int depth = 1;                         // k
    std::uint64_t horizon = 0;
    std::string set_descriptor;

    void validate() const; // invariants: ordering, horizon feasibility
    nlohmann::json to_json() const;
    static SumsetCertificate from_json(const nlohmann::json& j);
};

struct CertificateReport {
    bool pass = false;
    std::uint64_t subsets_checked = 0;
    std::optional<std::vector<std::uint64_t>> first_failing_subset;
    std::optional<std::uint64_t> first_failing_sum;
};

// Exhaustive subset-sum verification, exact integer arithmetic, no tolerance.
CertificateReport verify_certificate(const NaturalSet& a, const SumsetCertificate& cert);

struct SearchBudget {
    std::uint64_t t_max = 8;
    std::size_t target_size = 6;
    std::uint64_t node_limit = 2'000'000; // per shift t
};

struct SearchResult {
    std::optional<SumsetCertificate> certificate;
    bool budget_exhausted = false;
    std::uint64_t nodes_used = 0;
    std::optional<SumsetCertificate> best_partial;
};

// Depth-first search over increasing generators with subset-sum pruning;
// smallest t first, then smallest next generator.
SearchResult find_configuration(const NaturalSet& a, int k, const SearchBudget& budget);

// Number of nonempty subsets of size <= k from m elements; throws past the
// exactness cap of 1e6.
std::uint64_t subset_count_capped(std::size_t m, int k);

} // namespace sumdyn
