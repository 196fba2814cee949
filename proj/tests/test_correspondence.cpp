#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sumdyn/correspondence.hpp"

using namespace sumdyn;

namespace {
NaturalSet gen(const std::string& s, std::uint64_t h) {
    return generate_set(GeneratorSpec::parse(s, h));
}
} // namespace

TEST_CASE("symbolic model reproduces membership exactly") {
    auto a = gen("odds", 500);
    auto model = build_symbolic(a); // exhaustive pre-return check inside
    // n = 1 lands in the cylinder, n = 2 does not
    CHECK(model.system.member(model.cylinder, model.system.apply(model.point, 1)));
    CHECK_FALSE(model.system.member(model.cylinder, model.system.apply(model.point, 2)));
    // full round trip re-checked here against the set
    for (std::uint64_t n = 1; n <= 500; ++n) {
        CHECK(model.system.member(model.cylinder,
                                  model.system.apply(model.point,
                                                     static_cast<long long>(n))) ==
              a.contains(n));
    }
}

TEST_CASE("full set maps to the all-ones tail") {
    auto a = gen("full", 100);
    auto model = build_symbolic(a);
    for (std::uint64_t n = 1; n <= 100; ++n)
        CHECK(model.system.member(model.cylinder,
                                  model.system.apply(model.point, static_cast<long long>(n))));
}

TEST_CASE("random sets pass the exhaustive equivalence check") {
    auto a = gen("bernoulli:0.5,7", 2000);
    auto model = build_symbolic(a);
    CHECK(model.usable_horizon == 2000);
}

TEST_CASE("cylinder membership reads only the first symbol") {
    auto a = gen("bernoulli:0.5,7", 400);
    auto model = build_symbolic(a);
    // any two shifts with equal first symbol get the same verdict, whatever
    // the later symbols do
    for (long long n = 1; n + 1 <= 399; ++n) {
        for (long long m = n + 1; m <= std::min<long long>(n + 8, 399); ++m) {
            auto pn = model.system.apply(model.point, n);
            auto pm = model.system.apply(model.point, m);
            if (pn.sym->symbol(1) == pm.sym->symbol(1)) {
                CHECK(model.system.member(model.cylinder, pn) ==
                      model.system.member(model.cylinder, pm));
            }
        }
    }
}

TEST_CASE("horizon too small is rejected") {
    CHECK_THROWS_AS(build_symbolic(gen("full", 1)), ArgumentError);
}

TEST_CASE("generic windows report maximal placements") {
    auto mod3 = gen("congruence:0,3", 3000);
    auto ws = select_generic_windows(mod3, 4);
    CHECK(ws.size() == 4);
    for (const auto& w : ws) {
        CHECK(std::fabs(w.density.value() - 1.0 / 3.0) <=
              1.0 / static_cast<double>(w.window.length));
    }

    auto f = gen("full", 1000);
    for (const auto& w : select_generic_windows(f, 3))
        CHECK(w.density == Rational(1, 1));

    auto o = gen("odds", 1000);
    for (const auto& w : select_generic_windows(o, 3))
        CHECK(std::fabs(w.density.value() - 0.5) <= 1.0 / static_cast<double>(w.window.length));

    CHECK_THROWS_AS(select_generic_windows(f, 0), ArgumentError);
}
