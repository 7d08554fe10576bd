#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hprs/error.hpp"
#include "hprs/semantics.hpp"
#include "oracles.hpp"

using namespace hprs;

namespace {

// A requirement whose signal is the raw variable `f`, so traces can be
// written as plain value lists.
RequirementSpec raw_requirement(RequirementClass cls) {
    RequirementSpec req;
    req.cls = cls;
    req.name = "probe";
    req.signal = Expr::variable("f");
    req.bounds = {-10.0, 10.0};
    return req;
}

Trace trace_of(const std::vector<double>& values) {
    Trace t;
    for (double v : values) t.states.push_back({{"f", v}});
    t.horizon = static_cast<int>(values.size()) - 1;
    return t;
}

}  // namespace

TEST_CASE("sigma: quantifier semantics per class") {
    CHECK(sigma(raw_requirement(RequirementClass::TargetAchieve), trace_of({-1, -1, 2})));
    CHECK_FALSE(sigma(raw_requirement(RequirementClass::TargetAchieve), trace_of({-2, -1})));

    CHECK_FALSE(sigma(raw_requirement(RequirementClass::TargetConquer), trace_of({-1, 2, -1})));
    CHECK(sigma(raw_requirement(RequirementClass::TargetConquer), trace_of({-1, 2, 1})));

    CHECK(sigma(raw_requirement(RequirementClass::Safety), trace_of({1, 1, 1})));
    CHECK_FALSE(sigma(raw_requirement(RequirementClass::Safety), trace_of({1, -0.1, 1})));

    CHECK(sigma(raw_requirement(RequirementClass::Comfort), trace_of({-5, -5})));

    CHECK_THROWS_AS((void)sigma(raw_requirement(RequirementClass::Safety), trace_of({})), Error);
}

TEST_CASE("sigma: boundary value zero counts as satisfaction") {
    CHECK(sigma(raw_requirement(RequirementClass::Safety), trace_of({0.0, 0.0})));
    CHECK(sigma(raw_requirement(RequirementClass::TargetAchieve), trace_of({-1.0, 0.0})));
}

TEST_CASE("sigma_task: conjunction over the requirement set") {
    std::mt19937_64 rng(37);
    const auto task = oracle::random_task(rng);
    const auto trace = oracle::random_trace(task, rng);
    bool all = true;
    for (const auto& req : task.requirements()) all = all && sigma(req, trace);
    CHECK(sigma_task(task, trace) == all);
}

TEST_CASE("sigma_avg: fraction of satisfying steps") {
    const auto comfort = raw_requirement(RequirementClass::Comfort);
    CHECK(sigma_avg(comfort, trace_of({1, -1, 1, -1})) == doctest::Approx(0.5));
    CHECK(sigma_avg(comfort, trace_of({1, 2, 0})) == doctest::Approx(1.0));
    CHECK(sigma_avg(comfort, trace_of({-1, -1, -1})) == doctest::Approx(0.0));

    CHECK_THROWS_AS((void)sigma_avg(raw_requirement(RequirementClass::Safety), trace_of({1})),
                    Error);
    CHECK_THROWS_AS((void)sigma_avg(comfort, trace_of({})), Error);
}

TEST_CASE("robustness: closed forms on value lists") {
    CHECK(robustness(raw_requirement(RequirementClass::Safety), trace_of({3, 1, 2})) ==
          doctest::Approx(1.0));
    CHECK(robustness(raw_requirement(RequirementClass::TargetAchieve), trace_of({-2, -1})) ==
          doctest::Approx(-1.0));
    CHECK(robustness(raw_requirement(RequirementClass::TargetConquer), trace_of({-1, 2, -1})) ==
          doctest::Approx(-1.0));
    CHECK(robustness(raw_requirement(RequirementClass::TargetConquer), trace_of({-1, 2, 1})) ==
          doctest::Approx(1.0));
}

TEST_CASE("property: implication chain ensure => conquer => achieve") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> len(1, 20);
    std::uniform_real_distribution<double> value(-1.0, 1.0);
    for (int iter = 0; iter < 1000; ++iter) {
        std::vector<double> f(static_cast<std::size_t>(len(rng)));
        for (auto& v : f) v = value(rng);
        const auto t = trace_of(f);
        const bool ens = sigma(raw_requirement(RequirementClass::Safety), t);
        const bool con = sigma(raw_requirement(RequirementClass::TargetConquer), t);
        const bool ach = sigma(raw_requirement(RequirementClass::TargetAchieve), t);
        if (ens) CHECK(con);
        if (con) CHECK(ach);
        // conquer satisfied forces the final state to satisfy
        if (con) CHECK(f.back() >= 0.0);
    }
}

TEST_CASE("property: monitor agrees with the brute-force quantifier oracle") {
    std::mt19937_64 rng(43);
    int checked = 0;
    for (int iter = 0; iter < 1000; ++iter) {
        const auto task = oracle::random_task(rng);
        const auto trace = oracle::random_trace(task, rng, 20);
        for (const auto& req : task.requirements()) {
            CHECK(sigma(req, trace) == oracle::sigma_bruteforce(req, trace));
            CHECK(robustness(req, trace) ==
                  doctest::Approx(oracle::robustness_bruteforce(req, trace)).epsilon(1e-15));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("property: robustness sign agrees with sigma away from zero") {
    std::mt19937_64 rng(47);
    for (int iter = 0; iter < 1000; ++iter) {
        const auto task = oracle::random_task(rng);
        const auto trace = oracle::random_trace(task, rng, 20);
        for (const auto& req : task.requirements()) {
            if (req.cls == RequirementClass::Comfort) continue;  // sigma is vacuous
            const double rho = robustness(req, trace);
            if (rho > 0.0) CHECK(sigma(req, trace));
            if (rho < 0.0) CHECK_FALSE(sigma(req, trace));
        }
    }
}

TEST_CASE("property: sigma_avg bounds and saturation") {
    std::mt19937_64 rng(53);
    for (int iter = 0; iter < 500; ++iter) {
        const auto task = oracle::random_task(rng);
        const auto trace = oracle::random_trace(task, rng, 12);
        for (std::size_t i : task.comfort_indices()) {
            const auto& req = task.requirements()[i];
            const double avg = sigma_avg(req, trace);
            CHECK(avg >= 0.0);
            CHECK(avg <= 1.0);
            bool always = true;
            for (const auto& s : trace.states) always = always && req.eval(s) >= 0.0;
            CHECK((avg == 1.0) == always);
        }
    }
}

TEST_CASE("tltl_robustness: combines requirements as one formula") {
    std::mt19937_64 rng(59);
    for (int iter = 0; iter < 200; ++iter) {
        const auto task = oracle::random_task(rng);
        const auto trace = oracle::random_trace(task, rng, 10);

        double expected_min = std::numeric_limits<double>::infinity();
        for (const auto& req : task.requirements()) {
            expected_min = std::min(expected_min, oracle::robustness_bruteforce(req, trace));
        }
        CHECK(tltl_robustness(task, trace, ComfortCombine::MinConjunction) ==
              doctest::Approx(expected_min).epsilon(1e-12));

        // mean combination never drops below the min combination
        CHECK(tltl_robustness(task, trace, ComfortCombine::Mean) >= expected_min - 1e-12);
    }
}
