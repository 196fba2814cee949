#include "cli.hpp"

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sumdyn/chunked.hpp"
#include "sumdyn/correspondence.hpp"
#include "sumdyn/kernels.hpp"
#include "sumdyn/measures.hpp"
#include "sumdyn/pipeline.hpp"
#include "sumdyn/progressions.hpp"
#include "sumdyn/recurrence.hpp"
#include "sumdyn/sets.hpp"
#include "sumdyn/uniformity.hpp"

namespace sumdyn::cli {

namespace {

constexpr int kSchemaVersion = 1;

struct Common {
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = ".";
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "RNG seed");
    sub->add_option("--threads", c.threads, "parallelism cap");
    sub->add_option("--out", c.out, "report output directory");
}

void write_report(const Common& c, const std::string& name, nlohmann::json j) {
    j["schema_version"] = kSchemaVersion;
    std::filesystem::create_directories(c.out);
    std::string path = c.out + "/" + name + ".json";
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot write report file " + path);
    f << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
}

void write_csv(const Common& c, const std::string& name,
               const std::vector<std::pair<double, double>>& rows) {
    std::filesystem::create_directories(c.out);
    std::string path = c.out + "/" + name + ".csv";
    std::ofstream f(path);
    if (!f) throw ArgumentError("cannot write csv file " + path);
    f.precision(17);
    f << "n,value\n";
    for (const auto& [n, v] : rows) f << n << "," << v << "\n";
}

double parse_alpha(const std::string& s) {
    if (s == "golden") return golden_ratio_frac();
    try {
        return std::stod(s);
    } catch (...) {
        throw ArgumentError("bad angle: " + s);
    }
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) out.push_back(parse_alpha(tok));
    return out;
}

std::vector<long long> parse_ints(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) {
            try {
                out.push_back(std::stoll(tok));
            } catch (...) {
                throw ArgumentError("bad integer list: " + s);
            }
        }
    return out;
}

// "char:f1[,f2][@re,im]": one trig character with an optional coefficient.
TrigPoly parse_observable(const std::string& s) {
    if (s == "one" || s == "const") return TrigPoly::constant(1.0);
    auto colon = s.find(':');
    if (colon == std::string::npos || s.substr(0, colon) != "char")
        throw ArgumentError("observable must be 'one' or 'char:<freqs>[@re,im]': " + s);
    std::string rest = s.substr(colon + 1);
    std::complex<double> coeff{1.0, 0.0};
    auto at = rest.find('@');
    if (at != std::string::npos) {
        auto c = parse_doubles(rest.substr(at + 1));
        if (c.size() != 2) throw ArgumentError("coefficient needs re,im");
        coeff = {c[0], c[1]};
        rest = rest.substr(0, at);
    }
    auto freqs = parse_ints(rest);
    if (freqs.empty()) throw ArgumentError("character needs at least one frequency");
    return TrigPoly::character(freqs, coeff, s);
}

DynamicalSystem parse_system(const std::string& kind, const std::string& alpha) {
    double a = parse_alpha(alpha);
    if (kind == "circle") return DynamicalSystem::circle(a);
    if (kind == "skew") return DynamicalSystem::skew(a);
    throw ArgumentError("system must be 'circle' or 'skew'");
}

NaturalSet make_set(const std::string& spec, std::uint64_t horizon) {
    return generate_set(GeneratorSpec::parse(spec, horizon));
}

nlohmann::json rational_json(const Rational& r) {
    return {{"num", r.num}, {"den", r.den}, {"value", r.value()}};
}

// Flat key=value config; values already present on the command line win.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string cfg_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            cfg_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                       args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            cfg_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (cfg_path.empty()) return args;
    std::ifstream f(cfg_path);
    if (!f) throw ArgumentError("cannot read config file " + cfg_path);
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ArgumentError("config line without '=': " + line);
        auto strip = [](std::string s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
                s.pop_back();
            return s;
        };
        std::string key = strip(line.substr(0, eq));
        std::string value = strip(line.substr(eq + 1));
        std::string flag = "--" + key;
        bool present = false;
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
        if (!present) args.push_back(flag + "=" + value);
    }
    return args;
}

// ---------------------------------------------------------------------------

int cmd_density(const Common& c, const std::string& set_spec, std::uint64_t horizon,
                const std::string& windows, const std::string& lengths) {
    NaturalSet a = make_set(set_spec, horizon);
    nlohmann::json rep;
    rep["command"] = "density";
    rep["set"] = a.descriptor();
    std::vector<std::pair<double, double>> csv;

    if (!windows.empty()) {
        std::vector<FolnerWindow> ws;
        std::stringstream ss(windows);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto colon = tok.find(':');
            if (colon == std::string::npos)
                throw ArgumentError("window must be start:length, got " + tok);
            ws.push_back({std::stoull(tok.substr(0, colon)),
                          std::stoull(tok.substr(colon + 1))});
        }
        auto vals = density_along(a, ws);
        rep["windows"] = nlohmann::json::array();
        for (std::size_t i = 0; i < ws.size(); ++i) {
            rep["windows"].push_back({{"start", ws[i].start},
                                      {"length", ws[i].length},
                                      {"density", rational_json(vals[i])}});
            csv.emplace_back(static_cast<double>(ws[i].length), vals[i].value());
        }
    }
    if (!lengths.empty()) {
        std::vector<std::uint64_t> ls;
        for (auto v : parse_ints(lengths)) ls.push_back(static_cast<std::uint64_t>(v));
        Rational best = upper_banach_density_estimate(a, ls);
        rep["upper_banach_estimate"] = rational_json(best);
    }
    write_report(c, "density_report", rep);
    if (!csv.empty()) write_csv(c, "density_plot", csv);
    return 0;
}

int cmd_find_sumset(const Common& c, const std::string& set_spec, std::uint64_t horizon, int k,
                    std::uint64_t tmax, std::size_t target, std::uint64_t nodes) {
    NaturalSet a = make_set(set_spec, horizon);
    SearchResult res = find_configuration(a, k, SearchBudget{tmax, target, nodes});
    nlohmann::json rep;
    rep["command"] = "find-sumset";
    rep["set"] = a.descriptor();
    rep["nodes_used"] = res.nodes_used;
    rep["budget_exhausted"] = res.budget_exhausted;
    if (res.certificate) {
        rep["certificate"] = res.certificate->to_json();
        CertificateReport check = verify_certificate(a, *res.certificate);
        rep["verified"] = check.pass;
        write_report(c, "certificate", rep);
        return check.pass ? 0 : 1;
    }
    if (res.best_partial) rep["best_partial"] = res.best_partial->to_json();
    write_report(c, "certificate", rep);
    return 2;
}

int cmd_verify(const Common& c, const std::string& set_spec, std::uint64_t horizon,
               const std::string& cert_file, std::uint64_t t, const std::string& b_list, int k) {
    SumsetCertificate cert;
    if (!cert_file.empty()) {
        std::ifstream f(cert_file);
        if (!f) throw ArgumentError("cannot read certificate " + cert_file);
        nlohmann::json j;
        f >> j;
        if (j.contains("certificate")) j = j["certificate"];
        cert = SumsetCertificate::from_json(j);
    } else {
        if (b_list.empty()) throw ArgumentError("verify: need --cert or --t/--B/--k");
        cert.t = t;
        for (auto v : parse_ints(b_list)) cert.generators.push_back(static_cast<std::uint64_t>(v));
        cert.depth = k;
        cert.horizon = horizon;
        cert.validate();
    }
    NaturalSet a = make_set(set_spec, horizon ? horizon : cert.horizon);
    CertificateReport rep = verify_certificate(a, cert);
    nlohmann::json out;
    out["command"] = "verify";
    out["set"] = a.descriptor();
    out["certificate"] = cert.to_json();
    out["pass"] = rep.pass;
    out["subsets_checked"] = rep.subsets_checked;
    if (rep.first_failing_subset) {
        out["first_failing_subset"] = *rep.first_failing_subset;
        out["first_failing_sum"] = *rep.first_failing_sum;
    }
    write_report(c, "verify_report", out);
    return rep.pass ? 0 : 1;
}

int cmd_correspond(const Common& c, const std::string& set_spec, std::uint64_t horizon) {
    NaturalSet a = make_set(set_spec, horizon);
    SymbolicModel model = build_symbolic(a); // throws if the exhaustive check fails
    auto windows = select_generic_windows(a, 5);
    nlohmann::json rep;
    rep["command"] = "correspond";
    rep["set"] = a.descriptor();
    rep["roundtrip_checked_up_to"] = model.usable_horizon;
    rep["roundtrip_pass"] = true;
    rep["generic_windows"] = nlohmann::json::array();
    for (const auto& w : windows)
        rep["generic_windows"].push_back({{"start", w.window.start},
                                          {"length", w.window.length},
                                          {"density", rational_json(w.density)}});
    write_report(c, "correspond_report", rep);
    return 0;
}

int cmd_progression(const Common& c, const std::string& kind, const std::string& alpha,
                    const std::string& start, int k, double tol, int witnesses, double r0,
                    double beta, bool use_beta) {
    DynamicalSystem sys = parse_system(kind, alpha);
    auto coords = parse_doubles(start);
    StatePoint a = coords.empty() ? sys.origin() : sys.make_point(coords);

    nlohmann::json rep;
    rep["command"] = "progression";
    if (use_beta) {
        ErdosProgression prog = rotation_progression(sys, a, beta, k, witnesses, tol);
        rep["progression"] = prog.to_json(sys);
        auto check = verify_progression(sys, prog, tol, witnesses);
        rep["verified"] = check.pass;
        write_report(c, "progression_report", rep);
        return check.pass ? 0 : 1;
    }
    ProgressionParams params;
    params.r0 = r0;
    params.tol = tol;
    params.min_witnesses = witnesses;
    ProgressionSearch search = find_progression(sys, a, k, params);
    rep["stages"] = search.stages;
    rep["final_radius"] = search.final_radius;
    if (!search.progression) {
        rep["found"] = false;
        write_report(c, "progression_report", rep);
        return 2;
    }
    rep["found"] = true;
    rep["progression"] = search.progression->to_json(sys);
    auto check = verify_progression(sys, *search.progression, tol, witnesses);
    rep["verified"] = check.pass;
    write_report(c, "progression_report", rep);
    return check.pass ? 0 : 1;
}

int cmd_extract(const Common& c, const std::string& alpha, const std::string& start, int k,
                double beta, double radius, int m_steps, double tol) {
    DynamicalSystem sys = DynamicalSystem::circle(parse_alpha(alpha));
    auto coords = parse_doubles(start);
    StatePoint a = coords.empty() ? sys.origin() : sys.make_point(coords);

    ErdosProgression prog = rotation_progression(sys, a, beta, k, 8, tol);
    std::vector<OpenRegion> regions;
    for (int j = 1; j <= k; ++j)
        regions.push_back(OpenRegion::ball(
            sys.make_point({frac_unit(a.coords[0] + frac_mul(j, beta))}), radius));
    ExtractResult ext = extract_sumset(sys, prog, regions, m_steps);
    nlohmann::json rep;
    rep["command"] = "extract";
    rep["transcript"] = ext.transcript;
    rep["complete"] = ext.complete;
    if (!ext.complete) {
        write_report(c, "extract_report", rep);
        return 2;
    }
    InclusionReport incl = verify_sumset_inclusion(sys, a, ext.b, regions, k);
    rep["inclusion_pass"] = incl.pass;
    rep["subsets_checked"] = incl.subsets_checked;
    write_report(c, "extract_report", rep);
    return incl.pass ? 0 : 1;
}

int cmd_measures(const Common& c, const std::string& check, const std::string& kind,
                 const std::string& alpha, const std::string& start, int k, std::size_t n_avg,
                 std::size_t cloud, int resolution, long long n_max,
                 const std::vector<std::string>& observables, const std::string& export_path,
                 double arc_radius) {
    DynamicalSystem sys = parse_system(kind, alpha);
    auto coords = parse_doubles(start);
    StatePoint a = coords.empty() ? sys.origin() : sys.make_point(coords);

    nlohmann::json rep;
    rep["command"] = "measures";
    rep["check"] = check;
    int code = 0;

    if (check == "xi" || check == "sigma" || check == "naive") {
        PointCloudMeasure m;
        if (check == "xi") {
            m = empirical_xi(sys, a, k, cloud);
        } else if (check == "sigma") {
            PointCloudMeasure xi = empirical_xi(sys, a, k, cloud);
            FiberLift lift = (sys.kind() == SystemKind::skew_product && k == 2)
                                 ? FiberLift::uniform_fiber
                                 : FiberLift::identity;
            m = build_sigma(sys, xi, a, lift, c.seed);
        } else {
            m = naive_sigma(sys, a, k, cloud);
        }
        rep["arity"] = m.arity;
        rep["points"] = m.count();
        rep["provenance"] = m.provenance;
        if (check == "sigma" && sys.kind() == SystemKind::skew_product && k == 2) {
            // fiber-marginal summary of the lifted coordinates
            std::vector<double> fibers;
            fibers.reserve(m.count() * 2);
            for (std::size_t i = 0; i < m.count(); ++i)
                for (int coord = 1; coord <= 2; ++coord)
                    fibers.push_back(m.at(i, coord).coords[1]);
            nlohmann::json bins = nlohmann::json::array();
            for (int b = 0; b < 16; ++b) {
                std::size_t cnt = kern::arc_count(fibers.data(), fibers.size(), b / 16.0,
                                                  (b + 1) / 16.0);
                bins.push_back(static_cast<double>(cnt) / static_cast<double>(fibers.size()));
            }
            rep["fiber_marginal_bins"] = bins;
        }
        if (!export_path.empty()) {
            m.export_columns(export_path);
            rep["exported"] = export_path;
        }
    } else if (check == "progressive") {
        PointCloudMeasure xi = empirical_xi(sys, a, k, cloud);
        PointCloudMeasure sigma = build_sigma(sys, xi, a, FiberLift::identity, c.seed);
        // arcs around the orbit tuple (T^7 a, ..., T^7k a); radius from the flag
        std::vector<OpenRegion> regions;
        for (int j = 1; j <= k; ++j)
            regions.push_back(OpenRegion::ball(sys.apply(a, 7LL * j), arc_radius));
        ProgressiveReport pr = check_progressive(sys, sigma, regions, n_max);
        rep["vacuous"] = pr.vacuous;
        rep["base_mass"] = pr.base_mass;
        rep["witness_count"] = pr.witnesses.size();
        if (!pr.witnesses.empty()) {
            rep["first_witness"] = pr.witnesses.front().n;
            std::vector<std::pair<double, double>> csv;
            for (const auto& w : pr.witnesses)
                csv.emplace_back(static_cast<double>(w.n), w.mass);
            write_csv(c, "progressive_witnesses", csv);
        }
        code = pr.witnesses.empty() && !pr.vacuous ? 1 : 0;
    } else if (check == "marginal") {
        PointCloudMeasure xi = empirical_xi(sys, a, k, cloud);
        PointCloudMeasure sigma = build_sigma(sys, xi, a, FiberLift::identity, c.seed);
        PointCloudMeasure mu;
        mu.arity = 1;
        for (std::size_t j = 1; j <= cloud; ++j)
            mu.tuples.push_back(sys.apply(a, static_cast<long long>(j)));
        mu.provenance = "orbit";
        DominationReport dr = check_marginal_domination(sys, sigma, mu, resolution);
        rep["pass"] = dr.pass;
        rep["violations"] = dr.violations;
        rep["worst_excess"] = dr.worst_excess;
        rep["coordinates"] = dr.cells;
        code = dr.pass ? 0 : 1;
    } else if (check == "invariance") {
        PointCloudMeasure xi = empirical_xi(sys, a, k, cloud);
        PointCloudMeasure sigma = build_sigma(sys, xi, a, FiberLift::identity, c.seed);
        InvarianceReport ir = check_sigma_invariance(sys, sigma, 1, resolution);
        rep["max_cell_discrepancy"] = ir.max_cell_discrepancy;
        rep["cells"] = ir.cells;
    } else if (check == "diagonal") {
        std::vector<TrigPoly> g;
        for (const auto& s : observables) g.push_back(parse_observable(s));
        if (static_cast<int>(g.size()) != k)
            throw ArgumentError("measures diagonal: need k observables via --observable");
        DiagonalAverageReport dr = check_diagonal_average(sys, a, k, n_avg, g, cloud);
        rep["lhs"] = {dr.lhs.real(), dr.lhs.imag()};
        rep["rhs"] = {dr.rhs.real(), dr.rhs.imag()};
        rep["diff"] = dr.diff;
    } else if (check == "coordinate") {
        if (observables.size() != 1)
            throw ArgumentError("measures coordinate: need exactly one --observable for G");
        TrigPoly g = parse_observable(observables[0]);
        CoordinateInvarianceReport cr = check_coordinate_invariance(sys, a, k, n_avg, g, cloud);
        rep["discrepancy"] = cr.discrepancy;
        rep["u_norm"] = cr.u_norm;
        rep["v_norm"] = cr.v_norm;
    } else if (check == "correlation") {
        if (observables.size() != 2)
            throw ArgumentError("measures correlation: need --observable g and F");
        TrigPoly g = parse_observable(observables[0]);
        TrigPoly big_f = parse_observable(observables[1]);
        DynamicalSystem ysys = DynamicalSystem::circle(sys.alpha());
        CorrelationBoundReport cr = check_correlation_orthogonality(
            sys, a, g, 1, ysys, ysys.origin(), big_f, n_avg, 64, cloud);
        rep["lhs"] = cr.lhs;
        rep["rhs"] = cr.rhs;
        rep["pass"] = cr.pass;
        code = cr.pass ? 0 : 1;
    } else {
        throw ArgumentError("unknown measures check: " + check);
    }
    write_report(c, "measures_" + check, rep);
    return code;
}

int cmd_gowers(const Common& c, const std::string& values_file, const std::string& kind,
               const std::string& alpha, const std::string& observable, int s, long long n_avg,
               long long h_budget) {
    nlohmann::json rep;
    rep["command"] = "gowers";
    rep["s"] = s;
    if (!values_file.empty()) {
        std::ifstream f(values_file);
        if (!f) throw ArgumentError("cannot read values file " + values_file);
        CyclicFunction fn;
        double re, im;
        while (f >> re >> im) fn.values.emplace_back(re, im);
        if (fn.values.empty()) throw ArgumentError("values file is empty");
        rep["N"] = fn.values.size();
        rep["H"] = 0;
        rep["budget"] = 0;
        rep["norm"] = gowers_norm(fn, s);
        rep["mode"] = "cyclic";
    } else {
        DynamicalSystem sys = parse_system(kind, alpha);
        TrajectoryObservable obs{sys, {sys.origin()}, parse_observable(observable), n_avg,
                                 h_budget};
        SeminormResult r = seminorm_trajectory(obs, s);
        rep["N"] = r.n_avg;
        rep["H"] = r.h_requested;
        rep["budget"] = r.h_effective;
        rep["norm"] = r.value;
        rep["mode"] = "trajectory";
    }
    write_report(c, "gowers_report", rep);
    return 0;
}

int cmd_recurrence(const Common& c, const std::string& alpha, const std::string& u_str,
                   const std::string& v_str, const std::string& arcs_str, long long window,
                   std::size_t cloud) {
    ExponentVector u{parse_ints(u_str)};
    ExponentVector v{parse_ints(v_str)};
    auto arcs_v = parse_doubles(arcs_str);
    if (arcs_v.size() != 4) throw ArgumentError("recurrence: --arcs needs lo1,hi1,lo2,hi2");
    ArcProduct arcs{arcs_v[0], arcs_v[1], arcs_v[2], arcs_v[3]};
    LineCloud lc = make_line_cloud(parse_alpha(alpha), cloud);
    RecurrenceReport rr = check_recurrence_average(lc, u, v, arcs, window);
    nlohmann::json rep;
    rep["command"] = "recurrence";
    rep["invariance_ok"] = rr.invariance_ok;
    rep["invariance_discrepancy"] = rr.invariance_discrepancy;
    rep["set_mass"] = rr.set_mass;
    rep["average"] = rr.average;
    rep["witness_count"] = rr.witnesses.size();
    rep["witnesses"] = rr.witnesses;
    rep["dyadic_witness_density"] = rr.dyadic_witness_density;
    std::vector<std::pair<double, double>> csv;
    for (auto n : rr.witnesses) csv.emplace_back(static_cast<double>(n), 1.0);
    write_report(c, "recurrence_report", rep);
    if (!csv.empty()) write_csv(c, "recurrence_witnesses", csv);
    if (!rr.invariance_ok || rr.set_mass <= 0.0) return 3;
    return rr.average > 0.0 ? 0 : 1;
}

int cmd_counterexample(const Common& c, const std::string& alpha, long long window,
                       double delta, std::size_t cloud) {
    CounterexampleReport rr = counterexample_demo(parse_alpha(alpha), window, delta, cloud);
    nlohmann::json rep;
    rep["command"] = "counterexample";
    rep["delta"] = rr.delta;
    rep["min_orbit_gap"] = rr.min_orbit_gap;
    rep["window"] = rr.window;
    rep["all_empty"] = rr.all_empty;
    rep["nonempty_n"] = rr.nonempty_n;
    write_report(c, "counterexample_report", rep);
    return rr.all_empty ? 0 : 1;
}

int cmd_pipeline(const Common& c, const std::string& set_spec, std::uint64_t horizon, int k,
                 std::uint64_t tmax, int target, double tol) {
    NaturalSet a = make_set(set_spec, horizon);
    PipelineOptions opt;
    opt.k = k;
    opt.t_max = tmax;
    opt.target_generators = target;
    opt.tol = tol;
    PipelineResult res = run_pipeline(a, opt);
    nlohmann::json rep;
    rep["command"] = "pipeline";
    rep["set"] = a.descriptor();
    rep["trace"] = res.trace;
    if (res.certificate) {
        rep["certificate"] = res.certificate->to_json();
        rep["t"] = res.t_used;
        rep["verified"] = res.verification->pass;
        rep["subsets_checked"] = res.verification->subsets_checked;
        write_report(c, "pipeline_report", rep);
        return res.verification->pass ? 0 : 1;
    }
    rep["verified"] = false;
    write_report(c, "pipeline_report", rep);
    return res.budget_exhausted ? 2 : 1;
}

} // namespace

int run(const std::vector<std::string>& raw_args) {
    std::vector<std::string> args;
    CLI::App app{"sumset certificates and the dynamics behind them"};
    app.require_subcommand(1);

    try {
        args = apply_config(raw_args);
    } catch (const ArgumentError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }

    // density
    Common c_density;
    std::string d_set = "full", d_windows, d_lengths;
    std::uint64_t d_horizon = 100000;
    auto* density = app.add_subcommand("density", "exact window densities");
    add_common(density, c_density);
    density->add_option("--set", d_set, "set generator");
    density->add_option("--horizon", d_horizon, "membership horizon");
    density->add_option("--windows", d_windows, "start:length,...");
    density->add_option("--lengths", d_lengths, "sliding upper-density lengths");

    // find-sumset
    Common c_find;
    std::string f_set = "odds";
    std::uint64_t f_horizon = 1000000, f_tmax = 8, f_nodes = 2000000;
    int f_k = 2;
    std::size_t f_target = 6;
    auto* findcmd = app.add_subcommand("find-sumset", "search for a certificate");
    add_common(findcmd, c_find);
    findcmd->add_option("--set", f_set);
    findcmd->add_option("--horizon", f_horizon);
    findcmd->add_option("--k", f_k);
    findcmd->add_option("--tmax", f_tmax);
    findcmd->add_option("--target-size", f_target);
    findcmd->add_option("--budget-nodes", f_nodes);

    // verify
    Common c_verify;
    std::string v_set = "odds", v_cert, v_b;
    std::uint64_t v_horizon = 0, v_t = 0;
    int v_k = 2;
    auto* verify = app.add_subcommand("verify", "verify a certificate exactly");
    add_common(verify, c_verify);
    verify->add_option("--set", v_set);
    verify->add_option("--horizon", v_horizon);
    verify->add_option("--cert", v_cert, "certificate JSON file");
    verify->add_option("--t", v_t);
    verify->add_option("--B", v_b, "comma-separated generators");
    verify->add_option("--k", v_k);

    // correspond
    Common c_corr;
    std::string co_set = "odds";
    std::uint64_t co_horizon = 10000;
    auto* correspond = app.add_subcommand("correspond", "symbolic model + exhaustive check");
    add_common(correspond, c_corr);
    correspond->add_option("--set", co_set);
    correspond->add_option("--horizon", co_horizon);

    // progression
    Common c_prog;
    std::string p_kind = "circle", p_alpha = "golden", p_start;
    int p_k = 2, p_witnesses = 3;
    double p_tol = 1e-3, p_r0 = 0.1, p_beta = 0.0;
    bool p_use_beta = false;
    auto* progression = app.add_subcommand("progression", "find or build a progression");
    add_common(progression, c_prog);
    progression->add_option("--system", p_kind);
    progression->add_option("--alpha", p_alpha);
    progression->add_option("--a", p_start, "start point coords");
    progression->add_option("--k", p_k);
    progression->add_option("--tol", p_tol);
    progression->add_option("--witnesses", p_witnesses);
    progression->add_option("--r0", p_r0);
    auto* beta_opt = progression->add_option("--beta", p_beta, "rotation oracle target gap");

    // extract
    Common c_ext;
    std::string e_alpha = "golden", e_start;
    int e_k = 3, e_m = 6;
    double e_beta = 0.2, e_radius = 0.1, e_tol = 0.02;
    auto* extract = app.add_subcommand("extract", "greedy sumset extraction on a rotation");
    add_common(extract, c_ext);
    extract->add_option("--alpha", e_alpha);
    extract->add_option("--a", e_start);
    extract->add_option("--k", e_k);
    extract->add_option("--beta", e_beta);
    extract->add_option("--radius", e_radius);
    extract->add_option("--M", e_m);
    extract->add_option("--tol", e_tol);

    // measures
    Common c_meas;
    std::string m_check = "xi", m_kind = "circle", m_alpha = "golden", m_start, m_export;
    int m_k = 2, m_resolution = 32;
    std::size_t m_n = 100000, m_cloud = 4096;
    long long m_nmax = 2000;
    double m_arc = 0.15;
    std::vector<std::string> m_obs;
    auto* measures = app.add_subcommand("measures", "empirical measure checks");
    add_common(measures, c_meas);
    measures->add_option("--check", m_check,
                         "xi|sigma|naive|progressive|marginal|invariance|diagonal|coordinate|"
                         "correlation");
    measures->add_option("--system", m_kind);
    measures->add_option("--alpha", m_alpha);
    measures->add_option("--a", m_start);
    measures->add_option("--k", m_k);
    measures->add_option("--N", m_n);
    measures->add_option("--cloud", m_cloud);
    measures->add_option("--resolution", m_resolution);
    measures->add_option("--nmax", m_nmax);
    measures->add_option("--arc-radius", m_arc);
    measures->add_option("--observable", m_obs, "char:<freqs>[@re,im] (repeatable)");
    measures->add_option("--export", m_export, "columnar cloud export path");

    // gowers
    Common c_gow;
    std::string g_values, g_kind = "circle", g_alpha = "golden", g_obs = "char:1";
    int g_s = 2;
    long long g_n = 100000, g_h = 0;
    auto* gowers = app.add_subcommand("gowers", "box norms / orbit seminorms");
    add_common(gowers, c_gow);
    gowers->add_option("--values", g_values, "cyclic values file: re im per line");
    gowers->add_option("--system", g_kind);
    gowers->add_option("--alpha", g_alpha);
    gowers->add_option("--observable", g_obs);
    gowers->add_option("--s", g_s);
    gowers->add_option("--N", g_n);
    gowers->add_option("--H", g_h);

    // recurrence
    Common c_rec;
    std::string r_alpha = "golden", r_u = "2,1", r_v = "1,2", r_arcs = "0.1,0.4,0.2,0.5";
    long long r_window = 10000;
    std::size_t r_cloud = 4096;
    auto* recurrence = app.add_subcommand("recurrence", "product-set recurrence averages");
    add_common(recurrence, c_rec);
    recurrence->add_option("--alpha", r_alpha);
    recurrence->add_option("--u", r_u);
    recurrence->add_option("--v", r_v);
    recurrence->add_option("--arcs", r_arcs);
    recurrence->add_option("--window", r_window);
    recurrence->add_option("--cloud", r_cloud);

    // counterexample
    Common c_cex;
    std::string x_alpha = "golden";
    long long x_window = 100;
    double x_delta = 1e-4;
    std::size_t x_cloud = 4096;
    auto* counterexample = app.add_subcommand("counterexample", "thickened-line demonstration");
    add_common(counterexample, c_cex);
    counterexample->add_option("--alpha", x_alpha);
    counterexample->add_option("--window", x_window);
    counterexample->add_option("--delta", x_delta);
    counterexample->add_option("--cloud", x_cloud);

    // pipeline
    Common c_pipe;
    std::string pl_set = "odds";
    std::uint64_t pl_horizon = 1000000, pl_tmax = 8;
    int pl_k = 2, pl_target = 6;
    double pl_tol = 1.0 / 64.0;
    auto* pipeline = app.add_subcommand("pipeline", "set -> progression -> certificate");
    add_common(pipeline, c_pipe);
    pipeline->add_option("--set", pl_set);
    pipeline->add_option("--horizon", pl_horizon);
    pipeline->add_option("--k", pl_k);
    pipeline->add_option("--tmax", pl_tmax);
    pipeline->add_option("--target-size", pl_target);
    pipeline->add_option("--tol", pl_tol);

    std::vector<const char*> argv;
    argv.push_back("sumdyn");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) { // --help
            std::cout << app.help() << "\n";
            return 0;
        }
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }

    try {
        Common* common = nullptr;
        if (density->parsed()) common = &c_density;
        else if (findcmd->parsed()) common = &c_find;
        else if (verify->parsed()) common = &c_verify;
        else if (correspond->parsed()) common = &c_corr;
        else if (progression->parsed()) common = &c_prog;
        else if (extract->parsed()) common = &c_ext;
        else if (measures->parsed()) common = &c_meas;
        else if (gowers->parsed()) common = &c_gow;
        else if (recurrence->parsed()) common = &c_rec;
        else if (counterexample->parsed()) common = &c_cex;
        else if (pipeline->parsed()) common = &c_pipe;
        if (common) set_max_threads(common->threads);

        if (density->parsed())
            return cmd_density(c_density, d_set, d_horizon, d_windows, d_lengths);
        if (findcmd->parsed())
            return cmd_find_sumset(c_find, f_set, f_horizon, f_k, f_tmax, f_target, f_nodes);
        if (verify->parsed())
            return cmd_verify(c_verify, v_set, v_horizon, v_cert, v_t, v_b, v_k);
        if (correspond->parsed()) return cmd_correspond(c_corr, co_set, co_horizon);
        if (progression->parsed()) {
            p_use_beta = beta_opt->count() > 0;
            return cmd_progression(c_prog, p_kind, p_alpha, p_start, p_k, p_tol, p_witnesses,
                                   p_r0, p_beta, p_use_beta);
        }
        if (extract->parsed())
            return cmd_extract(c_ext, e_alpha, e_start, e_k, e_beta, e_radius, e_m, e_tol);
        if (measures->parsed())
            return cmd_measures(c_meas, m_check, m_kind, m_alpha, m_start, m_k, m_n, m_cloud,
                                m_resolution, m_nmax, m_obs, m_export, m_arc);
        if (gowers->parsed())
            return cmd_gowers(c_gow, g_values, g_kind, g_alpha, g_obs, g_s, g_n, g_h);
        if (recurrence->parsed())
            return cmd_recurrence(c_rec, r_alpha, r_u, r_v, r_arcs, r_window, r_cloud);
        if (counterexample->parsed())
            return cmd_counterexample(c_cex, x_alpha, x_window, x_delta, x_cloud);
        if (pipeline->parsed())
            return cmd_pipeline(c_pipe, pl_set, pl_horizon, pl_k, pl_tmax, pl_target, pl_tol);
        return 3;
    } catch (const BudgetError& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    } catch (const HorizonError& e) {
        std::cerr << "input error (horizon): " << e.what() << "\n";
        return 3;
    } catch (const KindMismatchError& e) {
        std::cerr << "input error (kind): " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace sumdyn::cli
