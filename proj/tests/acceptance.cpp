// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "sumdyn/kernels.hpp"
#include "sumdyn/measures.hpp"
#include "sumdyn/numeric.hpp"
#include "sumdyn/pipeline.hpp"
#include "sumdyn/progressions.hpp"
#include "sumdyn/recurrence.hpp"
#include "sumdyn/rng.hpp"
#include "sumdyn/sets.hpp"
#include "sumdyn/uniformity.hpp"

using namespace sumdyn;
using cplx = std::complex<double>;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& what, const std::string& detail) {
    std::printf("CRITERION %2d: %s - %s (%s)\n", idx, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// keeps the criterion lines readable: the CLI prints its reports to stdout
struct StdoutSilencer {
    int saved = -1;
    StdoutSilencer() {
        std::fflush(stdout);
        saved = dup(1);
        int devnull = open("/dev/null", O_WRONLY);
        if (devnull >= 0) {
            dup2(devnull, 1);
            close(devnull);
        }
    }
    ~StdoutSilencer() {
        std::fflush(stdout);
        if (saved >= 0) {
            dup2(saved, 1);
            close(saved);
        }
    }
};

// --- 1: exact certificate pipeline on the odd numbers ----------------------
void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    std::string out = "acceptance_out_c1";
    std::filesystem::remove_all(out);
    int code;
    {
        StdoutSilencer quiet;
        code = cli::run({"pipeline", "--set", "odds", "--k", "2", "--horizon", "1000000",
                         "--out", out});
    }
    double secs = seconds_since(t0);

    bool pass = code == 0;
    std::uint64_t t = 0;
    std::size_t bsize = 0;
    if (pass) {
        std::ifstream f(out + "/pipeline_report.json");
        nlohmann::json j;
        f >> j;
        auto cert = SumsetCertificate::from_json(j["certificate"]);
        t = cert.t;
        bsize = cert.generators.size();
        pass = pass && (t % 2 == 1) && bsize >= 5;
        auto a = generate_set(GeneratorSpec::parse("odds", 1000000));
        pass = pass && verify_certificate(a, cert).pass; // zero-tolerance recheck
    }
    pass = pass && secs < 10.0;
    std::filesystem::remove_all(out);
    char buf[160];
    std::snprintf(buf, sizeof buf, "t=%llu |B|=%zu %.2fs",
                  static_cast<unsigned long long>(t), bsize, secs);
    report(1, pass, "certificate pipeline on the odd numbers", buf);
}

// --- 2: greedy extraction end-to-end on the rotation -----------------------
void criterion_2() {
    auto t0 = std::chrono::steady_clock::now();
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    auto a = sys.make_point({0.1});
    const int k = 3;
    const double beta = 0.2, radius = 0.1;

    bool pass = false;
    std::uint64_t checked = 0;
    std::size_t m = 0;
    try {
        auto prog = rotation_progression(sys, a, beta, k, 8, 0.02);
        std::vector<OpenRegion> regions;
        for (int j = 1; j <= k; ++j)
            regions.push_back(OpenRegion::ball(
                sys.make_point({frac_unit(0.1 + frac_mul(j, beta))}), radius));
        auto ext = extract_sumset(sys, prog, regions, 6);
        m = ext.b.size();
        if (ext.complete && m == 6) {
            auto incl = verify_sumset_inclusion(sys, a, ext.b, regions, k);
            checked = incl.subsets_checked;
            pass = incl.pass && checked == 41;
        }
    } catch (const std::exception&) {
        pass = false;
    }
    double secs = seconds_since(t0);
    pass = pass && secs < 30.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "M=%zu subsets=%llu %.2fs", m,
                  static_cast<unsigned long long>(checked), secs);
    report(2, pass, "greedy extraction with exhaustive inclusion checks", buf);
}

// --- 3: rotation progressions land near arithmetic tuples ------------------
void criterion_3() {
    Rng rng(303);
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    int failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto a = sys.make_point({rng.uniform01()});
        int k = 1 + static_cast<int>(rng.below(3));
        ProgressionParams params; // default tol 1e-3
        auto res = find_progression(sys, a, k, params);
        if (!res.progression) {
            ++failures;
            continue;
        }
        const auto& prog = *res.progression;
        double beta = frac_unit(prog.points[1].coords[0] - prog.points[0].coords[0] + 1.0);
        for (int i = 0; i <= k; ++i) {
            double target = frac_unit(prog.points[0].coords[0] + frac_mul(i, beta));
            double d = circle_dist(prog.points[static_cast<std::size_t>(i)].coords[0], target);
            worst = std::max(worst, d);
            if (d > 3.0 * params.tol) ++failures;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "failures=%d worst=%.2e tol=3e-3", failures, worst);
    report(3, failures == 0, "100 fuzzed progressions within 3x tolerance of arithmetic",
           buf);
}

// --- 4: the finite averaging inequality never fails -------------------------
void criterion_4() {
    Rng rng(404);
    int failures = 0;
    double worst_margin = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::size_t n = 1 + rng.below(8);
        std::size_t dim = 1 + rng.below(8);
        std::vector<std::vector<cplx>> v(n, std::vector<cplx>(dim));
        std::vector<cplx> b(n);
        for (auto& vec : v)
            for (auto& x : vec) x = {rng.gaussian(), rng.gaussian()};
        for (auto& x : b) x = {rng.gaussian(), rng.gaussian()};
        auto rep = vdc_inequality(v, b);
        double margin = rep.lhs - rep.rhs;
        worst_margin = std::max(worst_margin, margin);
        if (margin > 1e-12) ++failures;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "failures=%d worst_margin=%.2e", failures, worst_margin);
    report(4, failures == 0, "10^4 fuzzed averaging inequalities", buf);
}

// --- 5: marginal domination at full scale ----------------------------------
void criterion_5() {
    auto t0 = std::chrono::steady_clock::now();
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    auto a = sys.make_point({0.3});
    auto xi = empirical_xi(sys, a, 3, 100000);
    auto sigma = build_sigma(sys, xi, a, FiberLift::identity);
    PointCloudMeasure mu;
    mu.arity = 1;
    for (long long j = 1; j <= 100000; ++j) mu.tuples.push_back(sys.apply(a, j));
    auto rep = check_marginal_domination(sys, sigma, mu, 32);
    double secs = seconds_since(t0);
    bool pass = rep.pass && rep.violations == 0 && secs < 20.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "violations=%d worst_excess=%.2e %.2fs", rep.violations,
                  rep.worst_excess, secs);
    report(5, pass, "marginal domination, k=3, N=1e5, 2^5 cells", buf);
}

// --- 6: diagonal averages meet the joining, and the gap decays -------------
void criterion_6() {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    auto a = sys.make_point({0.3});
    std::vector<TrigPoly> g = {TrigPoly::character({1}), TrigPoly::character({1})};
    auto r1 = check_diagonal_average(sys, a, 2, 100000, g, 512);
    auto r2 = check_diagonal_average(sys, a, 2, 1000000, g, 512);
    bool pass = r1.diff <= 0.05 && r2.diff <= 0.5 * r1.diff;
    char buf[160];
    std::snprintf(buf, sizeof buf, "diff(1e5)=%.3e diff(1e6)=%.3e ratio=%.3f", r1.diff,
                  r2.diff, r2.diff / r1.diff);
    report(6, pass, "diagonal average vs joining with 10x decay", buf);
}

// --- 7: coordinate invariance in L2(sigma), with decay ----------------------
void criterion_7() {
    auto sys = DynamicalSystem::circle(golden_ratio_frac());
    auto a = sys.make_point({0.3});
    TrigPoly g = TrigPoly::character({1, 1});
    auto r1 = check_coordinate_invariance(sys, a, 2, 100000, g, 512);
    auto r2 = check_coordinate_invariance(sys, a, 2, 1000000, g, 512);
    bool pass = r1.discrepancy <= 0.05 && r2.discrepancy <= 0.5 * r1.discrepancy;
    char buf[160];
    std::snprintf(buf, sizeof buf, "disc(1e5)=%.3e disc(1e6)=%.3e ratio=%.3f", r1.discrepancy,
                  r2.discrepancy, r2.discrepancy / r1.discrepancy);
    report(7, pass, "coordinate-swap invariance in L2 with 10x decay", buf);
}

// --- 8: recurrence positivity and the twisted counterexample ---------------
void criterion_8() {
    Rng rng(808);
    auto cloud = make_line_cloud(golden_ratio_frac(), 4096);
    int failures = 0;
    int accepted = 0;
    while (accepted < 100) {
        double w1 = 0.15 + 0.4 * rng.uniform01();
        double w2 = 0.15 + 0.4 * rng.uniform01();
        double l1 = rng.uniform01() * (1.0 - w1);
        double l2 = rng.uniform01() * (1.0 - w2);
        ArcProduct arcs{l1, l1 + w1, l2, l2 + w2};
        auto rep = check_recurrence_average(cloud, {{2, 1}}, {{1, 2}}, arcs, 10000);
        if (!rep.invariance_ok || rep.set_mass < 0.05) continue;
        ++accepted;
        if (!(rep.average > 0.0)) ++failures;
    }
    auto cex = counterexample_demo(golden_ratio_frac(), 100, 1e-4);
    bool pass = failures == 0 && cex.all_empty;
    char buf[160];
    std::snprintf(buf, sizeof buf, "failures=%d/100 counterexample_empty=%d", failures,
                  cex.all_empty ? 1 : 0);
    report(8, pass, "recurrence positivity + twisted-line counterexample", buf);
}

// --- 9: box-norm recursion vs the brute nested mean ------------------------
cplx brute_power(const std::vector<cplx>& f, int s) {
    const std::size_t n = f.size();
    std::vector<std::size_t> h(static_cast<std::size_t>(s), 0);
    cplx total{0, 0};
    std::size_t combos = 1;
    for (int i = 0; i < s; ++i) combos *= n;
    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t c = code;
        for (int i = 0; i < s; ++i) {
            h[static_cast<std::size_t>(i)] = c % n;
            c /= n;
        }
        for (std::size_t base = 0; base < n; ++base) {
            cplx prod{1, 0};
            for (std::size_t mask = 0; mask < (1u << s); ++mask) {
                std::size_t idx = base;
                int bits = 0;
                for (int i = 0; i < s; ++i)
                    if (mask & (1u << i)) {
                        idx += h[static_cast<std::size_t>(i)];
                        ++bits;
                    }
                cplx v = f[idx % n];
                prod *= (bits % 2 == 1) ? std::conj(v) : v;
            }
            total += prod;
        }
    }
    double scale = static_cast<double>(n);
    for (int i = 0; i < s; ++i) scale *= static_cast<double>(n);
    return total / scale;
}

void criterion_9() {
    Rng rng(909);
    double worst = 0.0;
    for (int fn = 0; fn < 100; ++fn) {
        std::size_t n = static_cast<std::size_t>(fn % 32) + 1; // covers every N <= 32
        CyclicFunction f;
        for (std::size_t i = 0; i < n; ++i)
            f.values.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1)});
        for (int s = 0; s <= 3; ++s) {
            cplx bp = brute_power(f.values, s);
            double brute = s == 0 ? std::abs(bp)
                                  : std::pow(std::max(bp.real(), 0.0),
                                             1.0 / std::ldexp(1.0, s));
            worst = std::max(worst, std::fabs(gowers_norm(f, s) - brute));
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "max |recursive - brute| = %.2e", worst);
    report(9, worst <= 1e-10, "box-norm oracle equivalence, N<=32, s<=3, 100 functions", buf);
}

// --- 10: trajectory seminorm sanity -----------------------------------------
void criterion_10() {
    auto rot = DynamicalSystem::circle(golden_ratio_frac());
    TrigPoly f;
    f.terms.push_back({0.3, {}});
    f.terms.push_back({1.0, {1}});
    TrajectoryObservable obs{rot, {rot.make_point({0.2})}, f, 100000, 0};
    double u1 = seminorm_trajectory(obs, 1).value;
    auto mean = birkhoff_average(rot, rot.make_point({0.2}), f, {1, 100000});
    bool pass = std::fabs(u1 - std::abs(mean)) <= 0.01 && std::fabs(u1 - 0.3) <= 0.01;

    auto skew = DynamicalSystem::skew(golden_ratio_frac());
    TrajectoryObservable fib{skew, {skew.make_point({0.37, 0.11})},
                             TrigPoly::character({0, 1}), 100000, 0};
    double u2 = seminorm_trajectory(fib, 2).value;
    double u3 = seminorm_trajectory(fib, 3).value;
    pass = pass && u2 <= 0.1 && u3 >= 0.9;
    char buf[160];
    std::snprintf(buf, sizeof buf, "U1=%.4f (|mean|=%.4f) U2=%.4f U3=%.4f", u1,
                  std::abs(mean), u2, u3);
    report(10, pass, "trajectory seminorm identities and budgets", buf);
}

} // namespace

int main() {
    std::printf("acceptance suite (kernel backend: %s)\n", kern::backend_name().c_str());
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "ALL PASS" : "FAILURES",
                g_failures);
    return g_failures;
}
