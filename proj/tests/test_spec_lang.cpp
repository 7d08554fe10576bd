#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hprs/error.hpp"
#include "hprs/spec_lang.hpp"
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

bool has_code(const ParseResult& r, const char* code) {
    for (const auto& d : r.diagnostics) {
        if (d.code == code) return true;
    }
    return false;
}

const char* kTinySpec =
    "var d_walls in [-1.0, 5.0]\n"
    "var v in [0.0, 10.0]\n"
    "var L in [0.0, 1.0]\n"
    "ensure \"no_collision\": d_walls > 0\n"
    "achieve \"lap\": L == 1.0 tol 0.01\n"
    "encourage \"speed_max\": v <= 3.5\n";

}  // namespace

TEST_CASE("parse: requirement classes map to their keywords") {
    auto r = parse_spec(kTinySpec);
    REQUIRE(r.ok());
    REQUIRE(r.draft.requirements.size() == 3);
    CHECK(r.draft.requirements[0].cls == RequirementClass::Safety);
    CHECK(r.draft.requirements[0].name == "no_collision");
    CHECK(r.draft.requirements[1].cls == RequirementClass::TargetAchieve);
    CHECK(r.draft.requirements[2].cls == RequirementClass::Comfort);
    CHECK(r.draft.decls.size() == 3);

    // `d_walls > 0` normalizes to the bare signal
    CHECK(r.draft.requirements[0].signal->str() == "d_walls");
    // equality with tolerance becomes a band signal
    CHECK(r.draft.requirements[1].signal->str() == "0.01 - abs(L - 1)");
}

TEST_CASE("parse: empty input gives an empty draft without diagnostics") {
    auto r = parse_spec("");
    CHECK(r.ok());
    CHECK(r.draft.decls.empty());
    CHECK(r.draft.requirements.empty());

    auto blank = parse_spec("\n\n# only a comment\n");
    CHECK(blank.ok());
    CHECK(blank.draft.requirements.empty());
}

TEST_CASE("parse: declarations keep source order") {
    auto r = parse_spec(kTinySpec);
    REQUIRE(r.ok());
    CHECK(r.draft.decls[0].name == "d_walls");
    CHECK(r.draft.decls[1].name == "v");
    CHECK(r.draft.decls[2].name == "L");
    CHECK(r.draft.requirements[0].name == "no_collision");
    CHECK(r.draft.requirements[2].name == "speed_max");
}

TEST_CASE("normalize_comparison: canonical forms") {
    auto r = parse_spec(
        "var v in [0.0, 10.0]\n"
        "encourage \"below\": v <= 3.5\n");
    REQUIRE(r.ok());
    CHECK(r.draft.requirements[0].signal->str() == "3.5 - v");

    Comparison ge{ComparisonOp::Ge, Expr::variable("a"), Expr::variable("b"), 0.0};
    CHECK(normalize_comparison(ge)->str() == "a - b");
    Comparison le{ComparisonOp::Le, Expr::variable("a"), Expr::variable("b"), 0.0};
    CHECK(normalize_comparison(le)->str() == "b - a");
    Comparison eq{ComparisonOp::EqTol, Expr::variable("a"), Expr::variable("b"), 0.5};
    CHECK(normalize_comparison(eq)->str() == "0.5 - abs(a - b)");

    Comparison bad{ComparisonOp::EqTol, Expr::variable("a"), Expr::variable("b"), 0.0};
    CHECK_THROWS_AS((void)normalize_comparison(bad), Error);
}

TEST_CASE("normalize_comparison: self-comparison warns and fails bounds") {
    auto r = parse_spec(
        "var x in [0.0, 1.0]\n"
        "ensure \"trivial\": x >= x\n");
    CHECK(has_code(r, "TrivialPredicate"));
    CHECK(has_code(r, "TriviallySatisfied"));
    CHECK_FALSE(r.ok());
}

TEST_CASE("normalize_comparison: strict forms warn and match non-strict") {
    auto strict = parse_spec(
        "var v in [0.0, 10.0]\n"
        "encourage \"cap\": v < 3.5\n");
    auto lax = parse_spec(
        "var v in [0.0, 10.0]\n"
        "encourage \"cap\": v <= 3.5\n");
    REQUIRE(strict.ok());
    REQUIRE(lax.ok());
    CHECK(has_code(strict, "StrictComparison"));
    CHECK(strict.draft.requirements[0].signal->structurally_equal(
        *lax.draft.requirements[0].signal));
}

TEST_CASE("normalize_comparison: abs bars") {
    auto r = parse_spec(
        "var alpha in [-1.0, 1.0]\n"
        "encourage \"steering\": |alpha| <= 0.1\n");
    REQUIRE(r.ok());
    CHECK(r.draft.requirements[0].signal->str() == "0.1 - abs(alpha)");
    CHECK(r.draft.requirements[0].bounds.lo == doctest::Approx(-0.9).epsilon(1e-12));
    CHECK(r.draft.requirements[0].bounds.hi == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("infer_bounds: interval arithmetic over the declared box") {
    std::vector<VarDecl> decls{{"v", 0.0, 10.0, {}}};
    auto f = Expr::binary(Expr::Op::Sub, Expr::constant(3.5), Expr::variable("v"));
    const Interval b = infer_bounds(*f, decls);
    CHECK(b.lo == doctest::Approx(-6.5).epsilon(1e-12));
    CHECK(b.hi == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("infer_bounds: errors") {
    SUBCASE("unknown variable") {
        std::vector<VarDecl> decls;
        auto f = Expr::variable("ghost");
        CHECK_THROWS_AS((void)infer_bounds(*f, decls), Error);
    }
    SUBCASE("constant-zero signal is trivially satisfied") {
        // the normalized form of `v >= v`
        std::vector<VarDecl> decls{{"v", 0.0, 1.0, {}}};
        auto zero = normalize_comparison(
            {ComparisonOp::Ge, Expr::variable("v"), Expr::variable("v"), 0.0});
        CHECK(zero->is_constant(0.0));
        CHECK_THROWS_WITH_AS((void)infer_bounds(*zero, decls),
                             doctest::Contains("TriviallySatisfied"), Error);
    }
    SUBCASE("always-negative signal is trivially violated") {
        std::vector<VarDecl> decls{{"v", 0.0, 1.0, {}}};
        auto f = Expr::binary(Expr::Op::Sub, Expr::variable("v"), Expr::constant(5.0));
        CHECK_THROWS_WITH_AS((void)infer_bounds(*f, decls),
                             doctest::Contains("TriviallyViolated"), Error);
    }
    SUBCASE("division by interval containing zero") {
        auto r = parse_spec(
            "var v in [-1.0, 1.0]\n"
            "encourage \"inv\": 1 / v >= 0.5\n");
        CHECK(has_code(r, "UnboundedSignal"));
    }
    SUBCASE("trivially violated") {
        auto r = parse_spec(
            "var v in [0.0, 1.0]\n"
            "ensure \"impossible\": v <= -2\n");
        CHECK(has_code(r, "TriviallyViolated"));
    }
}

TEST_CASE("explicit bounds annotation overrides inference") {
    auto r = parse_spec(
        "var v in [0.0, 10.0]\n"
        "encourage \"speed_max\": v <= 3.5 bounds [-6.5, 3.5]\n");
    REQUIRE(r.ok());
    CHECK(r.draft.requirements[0].explicit_bounds);
    CHECK(r.draft.requirements[0].bounds.lo == -6.5);

    auto bad = parse_spec(
        "var v in [0.0, 10.0]\n"
        "encourage \"speed_max\": v <= 3.5 bounds [0.5, 3.5]\n");
    CHECK(has_code(bad, "TriviallySatisfied"));
}

TEST_CASE("parse: diagnostics carry file, line, and column") {
    auto r = parse_spec("var v in [0.0, 10.0]\nensure missing_quotes: v >= 1\n", "task.req");
    REQUIRE_FALSE(r.ok());
    const auto& d = r.diagnostics.front();
    CHECK(d.pos.line == 2);
    CHECK(d.code == "SyntaxError");
    CHECK(d.str().find("task.req:2:") == 0);
}

TEST_CASE("parse: duplicate names are rejected") {
    auto vars = parse_spec("var v in [0.0, 1.0]\nvar v in [0.0, 2.0]\n");
    CHECK(has_code(vars, "DuplicateName"));

    auto reqs = parse_spec(
        "var v in [-1.0, 1.0]\n"
        "encourage \"cap\": v <= 0.5\n"
        "encourage \"cap\": v >= -0.5\n");
    CHECK(has_code(reqs, "DuplicateName"));
}

TEST_CASE("parse: unknown variables are reported with the requirement") {
    auto r = parse_spec("ensure \"ghostly\": ghost >= 1\n");
    CHECK(has_code(r, "UnknownVariable"));
    CHECK(r.draft.requirements.empty());
}

TEST_CASE("parse: equality without tol is non-normalizable") {
    auto r = parse_spec(
        "var L in [0.0, 1.0]\n"
        "achieve \"lap\": L == 1.0\n");
    CHECK(has_code(r, "NonNormalizablePredicate"));
}

TEST_CASE("round-trip: explicit bounds annotations survive printing") {
    auto first = parse_spec(
        "var v in [0.0, 10.0]\n"
        "achieve \"target\": v >= 5.0\n"
        "encourage \"speed_max\": v <= 3.5 bounds [-6.5, 3.5]\n");
    REQUIRE(first.ok());
    const std::string printed = pretty_print(first.draft);
    CHECK(printed.find("bounds [-6.5, 3.5]") != std::string::npos);
    auto second = parse_spec(printed);
    REQUIRE(second.ok());
    CHECK(draft_equal(first.draft, second.draft));
}

TEST_CASE("interval soundness holds across the bundled corpus") {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(19);
    for (const auto& entry : fs::directory_iterator(fs::path(HPRS_SOURCE_DIR) / "specs")) {
        if (entry.path().extension() != ".req") continue;
        auto parsed = parse_spec(read_file(entry.path().string()));
        REQUIRE(parsed.ok());
        for (int k = 0; k < 1000; ++k) {
            StateSample s;
            for (const auto& d : parsed.draft.decls) {
                std::uniform_real_distribution<double> unif(d.lo, d.hi);
                s[d.name] = unif(rng);
            }
            for (const auto& req : parsed.draft.requirements) {
                const double f = req.eval(s);
                CHECK(req.bounds.lo <= f + 1e-12);
                CHECK(f <= req.bounds.hi + 1e-12);
            }
        }
    }
}

TEST_CASE("round-trip: bundled corpus reparses structurally identical") {
    namespace fs = std::filesystem;
    const fs::path specs = fs::path(HPRS_SOURCE_DIR) / "specs";
    int checked = 0;
    for (const auto& entry : fs::directory_iterator(specs)) {
        if (entry.path().extension() != ".req") continue;
        INFO("file: ", entry.path().string());
        auto first = parse_spec(read_file(entry.path().string()), entry.path().filename().string());
        REQUIRE(first.ok());
        auto second = parse_spec(pretty_print(first.draft), "printed");
        REQUIRE(second.ok());
        CHECK(draft_equal(first.draft, second.draft));
        ++checked;
    }
    CHECK(checked >= 7);
}

TEST_CASE("property: inferred interval encloses sampled signal values") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 50; ++iter) {
        const auto task = oracle::random_task(rng);
        for (int k = 0; k < 20; ++k) {
            const auto s = oracle::random_state(task, rng);
            for (const auto& req : task.requirements()) {
                const double f = req.eval(s);
                CHECK(req.bounds.lo <= f + 1e-12);
                CHECK(f <= req.bounds.hi + 1e-12);
            }
        }
    }
}

TEST_CASE("property: normalization preserves comparison semantics") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> val(-2.0, 2.0);

    // random expression trees over two bound variables
    std::function<ExprPtr(int)> gen = [&](int depth) -> ExprPtr {
        std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
        switch (pick(rng)) {
            case 0: return Expr::constant(val(rng));
            case 1: return Expr::variable(std::uniform_int_distribution<int>(0, 1)(rng) ? "x" : "y");
            case 2: return Expr::binary(Expr::Op::Add, gen(depth - 1), gen(depth - 1));
            case 3: return Expr::binary(Expr::Op::Sub, gen(depth - 1), gen(depth - 1));
            case 4: return Expr::unary(Expr::Op::Abs, gen(depth - 1));
            case 5: return Expr::binary(Expr::Op::Min, gen(depth - 1), gen(depth - 1));
            default: return Expr::binary(Expr::Op::Max, gen(depth - 1), gen(depth - 1));
        }
    };

    for (int iter = 0; iter < 500; ++iter) {
        const ExprPtr a = gen(3);
        const ExprPtr b = gen(3);
        StateSample s{{"x", val(rng)}, {"y", val(rng)}};
        const double av = a->eval(s), bv = b->eval(s);

        const double f_ge = normalize_comparison({ComparisonOp::Ge, a, b, 0.0})->eval(s);
        CHECK((av >= bv) == (f_ge >= 0.0));

        const double f_le = normalize_comparison({ComparisonOp::Le, a, b, 0.0})->eval(s);
        CHECK((av <= bv) == (f_le >= 0.0));

        const double eps = 0.25;
        const double f_eq = normalize_comparison({ComparisonOp::EqTol, a, b, eps})->eval(s);
        CHECK((std::fabs(av - bv) <= eps) == (f_eq >= 0.0));
    }
}

TEST_CASE("property: parser is total on random byte strings") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> len(0, 160);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> printable(32, 126);
    for (int iter = 0; iter < 2000; ++iter) {
        std::string text;
        const int n = len(rng);
        const bool ascii = iter % 2 == 0;
        for (int i = 0; i < n; ++i) {
            text.push_back(static_cast<char>(ascii ? printable(rng) : byte(rng)));
            if (i % 23 == 22) text.push_back('\n');
        }
        const auto r = parse_spec(text);  // must not throw
        if (!r.ok()) CHECK(!r.diagnostics.empty());
    }
}

TEST_CASE("property: parser is total on mutated valid specs") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> printable(32, 126);
    for (int iter = 0; iter < 500; ++iter) {
        std::string text = kTinySpec;
        std::uniform_int_distribution<int> pos(0, static_cast<int>(text.size()) - 1);
        for (int k = 0; k < 5; ++k) {
            text[static_cast<std::size_t>(pos(rng))] = static_cast<char>(printable(rng));
        }
        (void)parse_spec(text);
    }
}
