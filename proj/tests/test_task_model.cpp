#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hprs/error.hpp"
#include "hprs/task.hpp"
#include "oracles.hpp"

using namespace hprs;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TaskSpec load_task(const std::string& name) {
    namespace fs = std::filesystem;
    const auto path = (fs::path(HPRS_SOURCE_DIR) / "specs" / name).string();
    auto parsed = parse_spec(read_file(path), name);
    REQUIRE(parsed.ok());
    return TaskSpec::validate(parsed.draft);
}

}  // namespace

TEST_CASE("validate: the seven-requirement driving task partitions 1/1/5") {
    const auto task = load_task("safe_driving.req");
    CHECK(task.size() == 7);
    CHECK(task.safety_indices().size() == 1);
    CHECK(task.comfort_indices().size() == 5);
    CHECK(task.target().name == "complete_lap");
    CHECK(task.target().cls == RequirementClass::TargetAchieve);
}

TEST_CASE("validate: rejects drafts without a unique target") {
    SUBCASE("two achieve lines") {
        auto r = parse_spec(
            "var L in [0.0, 1.0]\n"
            "achieve \"lap\": L == 1.0 tol 0.01\n"
            "achieve \"half\": L == 0.5 tol 0.01\n");
        REQUIRE(r.ok());
        CHECK_THROWS_WITH_AS((void)TaskSpec::validate(r.draft),
                             doctest::Contains("MultipleTargets"), Error);
    }
    SUBCASE("achieve plus conquer") {
        auto r = parse_spec(
            "var L in [0.0, 1.0]\n"
            "achieve \"lap\": L == 1.0 tol 0.01\n"
            "conquer \"hold\": L == 1.0 tol 0.02\n");
        REQUIRE(r.ok());
        CHECK_THROWS_AS((void)TaskSpec::validate(r.draft), Error);
    }
    SUBCASE("only ensure lines") {
        auto r = parse_spec(
            "var d in [-1.0, 1.0]\n"
            "ensure \"safe\": d >= 0\n");
        REQUIRE(r.ok());
        CHECK_THROWS_WITH_AS((void)TaskSpec::validate(r.draft), doctest::Contains("NoTarget"),
                             Error);
    }
    SUBCASE("empty draft") {
        auto r = parse_spec("var d in [-1.0, 1.0]\n");
        REQUIRE(r.ok());
        CHECK_THROWS_WITH_AS((void)TaskSpec::validate(r.draft), doctest::Contains("EmptyTask"),
                             Error);
    }
}

TEST_CASE("validate: empty safety set is allowed but flagged") {
    auto r = parse_spec(
        "var L in [0.0, 1.0]\n"
        "achieve \"lap\": L == 1.0 tol 0.01\n");
    REQUIRE(r.ok());
    std::vector<Diagnostic> warnings;
    const auto task = TaskSpec::validate(r.draft, &warnings);
    CHECK(task.safety_indices().empty());
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].code == "EmptySafetySet");
}

TEST_CASE("predecessors: exact sets for the driving task") {
    const auto task = load_task("safe_driving.req");
    const auto safety = task.safety_indices();

    SUBCASE("safety has none") {
        for (std::size_t i : safety) CHECK(task.predecessors(i).empty());
    }
    SUBCASE("target is preceded by the safety set") {
        const auto pred = task.predecessors(task.target_index());
        CHECK(pred == safety);
    }
    SUBCASE("comfort is preceded by safety and target") {
        for (std::size_t c : task.comfort_indices()) {
            const auto pred = task.predecessors(c);
            CHECK(pred.size() == safety.size() + 1);
            for (std::size_t s : safety) {
                CHECK(std::find(pred.begin(), pred.end(), s) != pred.end());
            }
            CHECK(std::find(pred.begin(), pred.end(), task.target_index()) != pred.end());
        }
    }
    SUBCASE("unknown requirement index") {
        CHECK_THROWS_AS((void)task.predecessors(task.size()), Error);
        CHECK_THROWS_AS((void)task.index_of("not_a_requirement"), Error);
    }
}

TEST_CASE("property: the precedence relation is a strict partial order") {
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 200; ++iter) {
        const auto task = oracle::random_task(rng);
        const std::size_t n = task.size();
        for (std::size_t a = 0; a < n; ++a) {
            CHECK_FALSE(task.precedes(a, a));  // irreflexive
            for (std::size_t b = 0; b < n; ++b) {
                if (task.precedes(a, b)) CHECK_FALSE(task.precedes(b, a));  // asymmetric
                for (std::size_t c = 0; c < n; ++c) {
                    if (task.precedes(a, b) && task.precedes(b, c)) {
                        CHECK(task.precedes(a, c));  // transitive
                    }
                }
            }
        }
    }
}

TEST_CASE("property: requirements of one class are mutually incomparable") {
    std::mt19937_64 rng(29);
    for (int iter = 0; iter < 100; ++iter) {
        const auto task = oracle::random_task(rng);
        const auto same_class = [&](const std::vector<std::size_t>& idx) {
            for (std::size_t a : idx) {
                for (std::size_t b : idx) {
                    CHECK_FALSE(task.precedes(a, b));
                }
            }
        };
        same_class(task.safety_indices());
        same_class(task.comfort_indices());
    }
}

TEST_CASE("property: predecessors match the class definition") {
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 100; ++iter) {
        const auto task = oracle::random_task(rng);
        CHECK(task.predecessors(task.target_index()) == task.safety_indices());
        for (std::size_t c : task.comfort_indices()) {
            const auto pred = task.predecessors(c);
            CHECK(pred.size() == task.safety_indices().size() + 1);
        }
        // cross-check against the oracle pair table
        const auto& reqs = task.requirements();
        for (std::size_t a = 0; a < task.size(); ++a) {
            for (std::size_t b = 0; b < task.size(); ++b) {
                CHECK(task.precedes(a, b) == oracle::precedes_bruteforce(reqs[a], reqs[b]));
            }
        }
    }
}
