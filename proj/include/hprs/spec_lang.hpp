#ifndef HPRS_SPEC_LANG_HPP
#define HPRS_SPEC_LANG_HPP

#include <string>
#include <string_view>
#include <vector>

#include "hprs/diagnostics.hpp"
#include "hprs/expr.hpp"

namespace hprs {

// One declared observable with its finite domain.
struct VarDecl {
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    SourcePos pos;
};

enum class RequirementClass { Safety, TargetAchieve, TargetConquer, Comfort };

const char* class_keyword(RequirementClass c);   // ensure / achieve / conquer / encourage
const char* class_label(RequirementClass c);     // safety / target / comfort
bool is_target(RequirementClass c);

// A parsed requirement, already normalized so satisfaction means f(s) >= 0,
// with the signal range enclosure [l, u], l < 0 < u.
struct RequirementSpec {
    RequirementClass cls = RequirementClass::Safety;
    std::string name;
    ExprPtr signal;
    Interval bounds;
    bool explicit_bounds = false;
    SourcePos pos;

    double eval(const StateSample& s) const { return signal->eval(s); }
};

struct TaskSpecDraft {
    std::vector<VarDecl> decls;
    std::vector<RequirementSpec> requirements;

    const VarDecl* find_decl(const std::string& name) const;
};

struct ParseResult {
    TaskSpecDraft draft;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return !has_errors(diagnostics); }
};

// Parses the requirements language. Total: any byte sequence yields a draft
// plus diagnostics, never an exception.
//
//   var v in [0.0, 10.0]
//   ensure "no_collision": d_walls > 0
//   achieve "lap": L == 1.0 tol 0.01
//   encourage "speed_max": v <= 3.5 bounds [-6.5, 3.5]
//
// One declaration per line, `#` starts a comment. The full grammar is in
// docs/grammar.ebnf.
ParseResult parse_spec(std::string_view text, std::string_view filename = "<input>");

enum class ComparisonOp { Ge, Gt, Le, Lt, EqTol };

// Comparison form as parsed, before normalization.
struct Comparison {
    ComparisonOp op = ComparisonOp::Ge;
    ExprPtr lhs;
    ExprPtr rhs;
    double tol = 0.0;  // EqTol only
};

// Canonicalizes a comparison into a single signal f with meaning f(s) >= 0:
//   a >= b        ->  a - b
//   a <= b        ->  b - a
//   a == b tol e  ->  e - abs(a - b)
// Strict forms normalize like their non-strict counterparts.
// Throws Error{NonNormalizablePredicate} for EqTol with tol <= 0.
ExprPtr normalize_comparison(const Comparison& c);

// Interval-arithmetic enclosure of `f` over the declared variable box.
// Throws Error{UnknownVariable} or Error{UnboundedSignal}.
Interval infer_bounds(const Expr& f, const std::vector<VarDecl>& decls);

// Canonical text form; parse(pretty_print(d)) is structurally identical to d.
std::string pretty_print(const TaskSpecDraft& draft);

bool draft_equal(const TaskSpecDraft& a, const TaskSpecDraft& b);

}  // namespace hprs

#endif  // HPRS_SPEC_LANG_HPP
