#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hprs/error.hpp"
#include "hprs/shaping.hpp"
#include "oracles.hpp"

using namespace hprs;

namespace {

// 1 safety + 1 target + 2 comfort over independent variables, with simple
// linear signals so score values can be dialed in directly.
TaskSpec fixed_task() {
    auto r = parse_spec(
        "var s in [-1.0, 1.0]\n"
        "var g in [-2.0, 2.0]\n"
        "var c1 in [-1.0, 1.0]\n"
        "var c2 in [-1.0, 1.0]\n"
        "ensure \"safe\": s >= 0\n"
        "achieve \"goal\": g >= 0\n"
        "encourage \"soft_a\": c1 >= 0\n"
        "encourage \"soft_b\": c2 >= 0\n");
    REQUIRE(r.ok());
    return TaskSpec::validate(r.draft);
}

StateSample state4(double s, double g, double c1, double c2) {
    return {{"s", s}, {"g", g}, {"c1", c1}, {"c2", c2}};
}

}  // namespace

TEST_CASE("score_b: indicator of the signal sign") {
    const auto task = fixed_task();
    const auto& safe = task.requirements()[task.safety_indices()[0]];
    CHECK(score_b(safe, state4(0.0, 0, 0, 0)) == 1.0);   // boundary included
    CHECK(score_b(safe, state4(-0.3, 0, 0, 0)) == 0.0);
    CHECK(score_b(safe, state4(1.0, 0, 0, 0)) == 1.0);   // upper bound
}

TEST_CASE("score_c: saturated, linear in the violation") {
    const auto task = fixed_task();
    const auto& goal = task.requirements()[task.target_index()];  // f = g, l = -2
    CHECK(score_c(goal, state4(0, 0.7, 0, 0)) == 1.0);
    CHECK(score_c(goal, state4(0, -2.0, 0, 0)) == 0.0);
    CHECK(score_c(goal, state4(0, -1.0, 0, 0)) == doctest::Approx(0.5).epsilon(1e-15));
    // values outside the declared range behave like the clamped signal
    StateSample wild = state4(0, -7.5, 0, 0);
    CHECK(score_c(goal, wild) == 0.0);
}

TEST_CASE("score_c: exact linearity on a signal grid") {
    const auto task = fixed_task();
    const auto& goal = task.requirements()[task.target_index()];
    const double l = goal.bounds.lo;
    for (int k = 0; k <= 100; ++k) {
        const double f = l + (0.0 - l) * k / 100.0;
        const double expected = 1.0 - f / l;
        CHECK(std::fabs(score_c(goal, state4(0, f, 0, 0)) - expected) < 1e-12);
    }
}

TEST_CASE("potential: closed-form example") {
    // r_S = 1, r_T = 0.5, r_C1 = 0.2, r_C2 = 0.4 => Psi = 1.8
    const auto task = fixed_task();
    // target: f = g with l = -2 -> c = 1 - f/l; f = -1 gives 0.5
    // comfort: f = c_i with l = -1 -> f = -0.8 gives 0.2, f = -0.6 gives 0.4
    const auto s = state4(0.5, -1.0, -0.8, -0.6);
    CHECK(potential(task, s) == doctest::Approx(1.8).epsilon(1e-12));
}

TEST_CASE("potential: degenerate score vectors") {
    const auto task = fixed_task();
    CHECK(potential_from_scores(task, {1, 1, 1, 1}) == doctest::Approx(4.0));
    // a violated safety gate zeroes every other term
    CHECK(potential_from_scores(task, {0, 1, 1, 1}) == 0.0);
    CHECK_THROWS_AS((void)potential_from_scores(task, {1, 1}), Error);
}

TEST_CASE("property: potential stays in [0, |Phi|] and matches the enumerator") {
    std::mt19937_64 rng(61);
    int checked = 0;
    while (checked < 10000) {
        const auto task = oracle::random_task(rng);
        for (int k = 0; k < 10; ++k, ++checked) {
            const auto s = oracle::random_state(task, rng);
            const double psi = potential(task, s);
            CHECK(psi >= 0.0);
            CHECK(psi <= static_cast<double>(task.size()));
            CHECK(psi == doctest::Approx(oracle::potential_bruteforce(task, s)).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: zeroing any safety score gates all non-safety terms") {
    std::mt19937_64 rng(67);
    for (int iter = 0; iter < 300; ++iter) {
        oracle::RandomTaskOptions opt;
        opt.allow_empty_safety = false;
        const auto task = oracle::random_task(rng, opt);
        auto r = scores(task, oracle::random_state(task, rng));
        std::uniform_int_distribution<std::size_t> pick(0, task.safety_indices().size() - 1);
        r[task.safety_indices()[pick(rng)]] = 0.0;

        double surviving_safety = 0.0;
        for (std::size_t i : task.safety_indices()) surviving_safety += r[i];
        CHECK(potential_from_scores(task, r) == surviving_safety);
    }
}

TEST_CASE("property: potential is monotone in every signal") {
    std::mt19937_64 rng(71);
    for (int iter = 0; iter < 300; ++iter) {
        const auto task = oracle::random_task(rng);
        auto r = scores(task, oracle::random_state(task, rng));
        const double before = potential_from_scores(task, r);
        std::uniform_int_distribution<std::size_t> pick(0, task.size() - 1);
        const std::size_t i = pick(rng);
        // raising a score can only raise the potential
        std::uniform_real_distribution<double> up(r[i], 1.0);
        r[i] = up(rng);
        CHECK(potential_from_scores(task, r) >= before - 1e-12);
    }
}

TEST_CASE("base_reward: indicator of the target at the next state") {
    const auto task = fixed_task();
    CHECK(base_reward(task, state4(0, 0.2, 0, 0)) == 1.0);
    CHECK(base_reward(task, state4(0, -0.2, 0, 0)) == 0.0);
    // a conquer target satisfied on the last k steps accumulates k base units
    std::vector<StateSample> states;
    for (double g : {-1.0, -1.0, 0.5, 0.5, 0.5}) states.push_back(state4(1, g, 0, 0));
    double total = 0.0;
    for (std::size_t t = 1; t < states.size(); ++t) total += base_reward(task, states[t]);
    CHECK(total == 3.0);
}

TEST_CASE("shaped_reward: potential-difference identity is exact") {
    const auto task = fixed_task();
    std::mt19937_64 rng(73);
    for (int iter = 0; iter < 200; ++iter) {
        const auto a = oracle::random_state(task, rng);
        const auto b = oracle::random_state(task, rng);
        const auto step = shaped_reward(task, a, b);
        CHECK(std::fabs(step.shaped - (step.base + step.potential_after - step.potential_before)) <
              1e-12);
    }
    // identical endpoint states shape to the bare base reward
    const auto s = state4(0.3, 0.4, 0.1, -0.2);
    const auto step = shaped_reward(task, s, s);
    CHECK(step.shaped == doctest::Approx(step.base));
}

TEST_CASE("shaped_reward: terminal convention") {
    const auto task = fixed_task();
    const auto a = state4(0.5, -1.0, 0.5, 0.5);
    const auto b = state4(0.5, 0.5, 0.5, 0.5);
    const auto zero = shaped_reward(task, a, b, /*next_terminal=*/true, TerminalPotential::Zero);
    CHECK(zero.potential_after == 0.0);
    const auto free = shaped_reward(task, a, b, /*next_terminal=*/true, TerminalPotential::Free);
    CHECK(free.potential_after == doctest::Approx(potential(task, b)));
}

TEST_CASE("property: per-episode potential differences telescope") {
    std::mt19937_64 rng(79);
    for (int iter = 0; iter < 1000; ++iter) {
        const auto task = oracle::random_task(rng);
        const auto trace = oracle::random_trace(task, rng, 20);
        double sum = 0.0;
        for (std::size_t t = 0; t + 1 < trace.states.size(); ++t) {
            sum += potential(task, trace.states[t + 1]) - potential(task, trace.states[t]);
        }
        const double endpoints =
            potential(task, trace.states.back()) - potential(task, trace.states.front());
        CHECK(std::fabs(sum - endpoints) < 1e-9);
    }
}

TEST_CASE("morl_reward: weight schemes") {
    const auto task = fixed_task();  // 1 safety, 1 target, 2 comfort

    SUBCASE("uniform of all-ones is one") {
        CHECK(morl_reward(task, state4(1, 1, 1, 1), MorlWeights::Uniform) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("decreasing weights follow the 4:2:1 class split") {
        const auto w = morl_weight_vector(task, MorlWeights::Decreasing);
        CHECK(w[task.safety_indices()[0]] == doctest::Approx(4.0 / 7.0));
        CHECK(w[task.target_index()] == doctest::Approx(2.0 / 7.0));
        for (std::size_t c : task.comfort_indices()) {
            CHECK(w[c] == doctest::Approx(1.0 / 14.0));
        }
        // scores (1, 0, 0, 0) pick out the safety weight
        CHECK(morl_reward(task, state4(1.0, -2.0, -1.0, -1.0), MorlWeights::Decreasing) ==
              doctest::Approx(4.0 / 7.0));
    }
    SUBCASE("explicit weights must be a distribution of the right size") {
        CHECK_THROWS_AS((void)morl_reward(task, state4(1, 1, 1, 1), {0.5, 0.5}), Error);
        CHECK_THROWS_AS((void)morl_reward(task, state4(1, 1, 1, 1), {0.5, 0.5, 0.5, 0.5}), Error);
        CHECK_THROWS_AS((void)morl_reward(task, state4(1, 1, 1, 1), {0.9, 0.2, -0.05, -0.05}),
                        Error);
        CHECK(morl_reward(task, state4(1, 1, 1, 1), {0.25, 0.25, 0.25, 0.25}) ==
              doctest::Approx(1.0));
    }
}

TEST_CASE("bhnr_reward: windowed robustness") {
    const auto task = fixed_task();
    std::mt19937_64 rng(83);
    const auto trace = oracle::random_trace(task, rng, 15);

    SUBCASE("window of one reduces to the pointwise minimum") {
        for (std::size_t t = 0; t < trace.states.size(); ++t) {
            double expected = std::numeric_limits<double>::infinity();
            for (const auto& req : task.requirements()) {
                expected = std::min(expected, req.eval(trace.states[t]));
            }
            CHECK(bhnr_reward(task, trace, t, 1) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    SUBCASE("an all-satisfying window scores positive") {
        Trace good;
        for (int i = 0; i < 5; ++i) good.states.push_back(state4(0.5, 0.5, 0.5, 0.5));
        good.horizon = 4;
        CHECK(bhnr_reward(task, good, 4, 3) > 0.0);
    }
    SUBCASE("matches the naive window evaluator") {
        for (std::size_t t = 0; t < trace.states.size(); ++t) {
            CHECK(bhnr_reward(task, trace, t, 10) ==
                  doctest::Approx(oracle::bhnr_bruteforce(task, trace, t, 10)).epsilon(1e-12));
        }
    }
    SUBCASE("empty windows are rejected") {
        CHECK_THROWS_AS((void)bhnr_reward(task, trace, 0, 0), Error);
        CHECK_THROWS_AS((void)bhnr_reward(task, Trace{}, 0, 5), Error);
    }
}
