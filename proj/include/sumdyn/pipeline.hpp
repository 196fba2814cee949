#pragma once

#include <optional>

#include <json.hpp>

#include "sumdyn/correspondence.hpp"
#include "sumdyn/progressions.hpp"
#include "sumdyn/sets.hpp"

namespace sumdyn {

struct PipelineOptions {
    int k = 2;
    std::uint64_t t_max = 8;
    int target_generators = 6;       // |B|
    double tol = 1.0 / 64.0;         // symbolic progression tolerance
    long long locate_budget = 2'000'000;
    long long witness_budget = 4'000'000;
    long long seed_scan = 200'000;
};

struct PipelineResult {
    std::optional<SumsetCertificate> certificate;
    std::optional<CertificateReport> verification;
    std::uint64_t t_used = 0;
    bool budget_exhausted = false;
    nlohmann::json trace; // per-shift attempt log, extraction transcript
};

// The full chain on a concrete set: symbolic model, shifted-cylinder
// progression, greedy extraction, exact subset-sum verification. Scans
// shifts t = 0..t_max in order and returns the first shift whose extracted
// generators verify exactly.
PipelineResult run_pipeline(const NaturalSet& a, const PipelineOptions& opt);

} // namespace sumdyn
