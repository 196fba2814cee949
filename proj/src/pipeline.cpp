#include "sumdyn/pipeline.hpp"

namespace sumdyn {

PipelineResult run_pipeline(const NaturalSet& a, const PipelineOptions& opt) {
    if (opt.k < 1) throw ArgumentError("pipeline: k must be >= 1");
    PipelineResult res;
    res.trace["attempts"] = nlohmann::json::array();

    SymbolicModel model = build_symbolic(a);

    for (std::uint64_t t = 0; t <= opt.t_max; ++t) {
        nlohmann::json attempt;
        attempt["t"] = t;

        std::vector<OpenRegion> regions(
            static_cast<std::size_t>(opt.k),
            model.cylinder.preimage(static_cast<long long>(t)));

        ProgressionParams params;
        params.r0 = 0.5;
        params.tol = opt.tol;
        params.locate_budget = opt.locate_budget;
        params.witness_budget = opt.witness_budget;
        params.seed_scan = opt.seed_scan;
        params.targets = regions;

        ProgressionSearch search = find_progression(model.system, model.point, opt.k, params);
        if (!search.progression) {
            attempt["progression"] = "not found";
            res.trace["attempts"].push_back(std::move(attempt));
            res.budget_exhausted = res.budget_exhausted || search.budget_exhausted;
            continue;
        }
        attempt["witnesses"] = search.progression->witnesses;

        ExtractResult ext = extract_sumset(model.system, *search.progression, regions,
                                           opt.target_generators, opt.witness_budget);
        attempt["extraction"] = ext.transcript;
        if (!ext.complete) {
            res.trace["attempts"].push_back(std::move(attempt));
            res.budget_exhausted = true;
            continue;
        }

        // the extracted times verify exactly on the dynamical side first
        InclusionReport incl = verify_sumset_inclusion(model.system, model.point, ext.b,
                                                       regions, opt.k);
        attempt["inclusion_pass"] = incl.pass;
        if (!incl.pass) {
            res.trace["attempts"].push_back(std::move(attempt));
            continue;
        }

        SumsetCertificate cert;
        cert.t = t;
        for (long long b : ext.b) cert.generators.push_back(static_cast<std::uint64_t>(b));
        cert.depth = opt.k;
        cert.horizon = a.horizon();
        cert.set_descriptor = a.descriptor();
        cert.validate();

        CertificateReport rep = verify_certificate(a, cert);
        attempt["certificate_pass"] = rep.pass;
        res.trace["attempts"].push_back(std::move(attempt));
        if (rep.pass) {
            res.certificate = std::move(cert);
            res.verification = rep;
            res.t_used = t;
            return res;
        }
    }
    return res;
}

} // namespace sumdyn
