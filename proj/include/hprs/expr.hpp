#ifndef HPRS_EXPR_HPP
#define HPRS_EXPR_HPP

#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "hprs/diagnostics.hpp"
#include "hprs/state.hpp"

namespace hprs {

// Closed interval [lo, hi] used for signal-range enclosures.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double x) const { return lo <= x && x <= hi; }
    double width() const { return hi - lo; }
};

Interval iadd(Interval a, Interval b);
Interval isub(Interval a, Interval b);
Interval imul(Interval a, Interval b);
Interval idiv(Interval a, Interval b);  // throws Error{UnboundedSignal} when 0 in b
Interval ineg(Interval a);
Interval iabs(Interval a);
Interval imin(Interval a, Interval b);
Interval imax(Interval a, Interval b);

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Arithmetic AST over named variables. Nodes are immutable and shared.
class Expr {
public:
    enum class Op { Const, Var, Neg, Abs, Add, Sub, Mul, Div, Min, Max };

    static ExprPtr constant(double value);
    static ExprPtr variable(std::string name, SourcePos pos = {});
    static ExprPtr unary(Op op, ExprPtr operand);
    static ExprPtr binary(Op op, ExprPtr lhs, ExprPtr rhs);

    Op op() const { return op_; }
    double value() const { return value_; }
    const std::string& var_name() const { return var_; }
    const ExprPtr& lhs() const { return lhs_; }
    const ExprPtr& rhs() const { return rhs_; }
    SourcePos pos() const { return pos_; }

    bool is_constant(double v) const { return op_ == Op::Const && value_ == v; }

    double eval(const StateSample& s) const;

    // Collects every distinct variable name referenced by this expression.
    void collect_variables(std::vector<std::string>& out) const;

    bool structurally_equal(const Expr& other) const;

    // Prints with minimal parentheses; abs is rendered as a function call.
    void print(std::ostream& os) const;
    std::string str() const;

private:
    Expr() = default;

    Op op_ = Op::Const;
    double value_ = 0.0;
    std::string var_;
    ExprPtr lhs_;
    ExprPtr rhs_;
    SourcePos pos_;

    void print_prec(std::ostream& os, int parent_prec) const;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

// Locale-independent shortest round-trip formatting for reals; used by the
// pretty-printer and every CSV writer so reruns are byte-identical.
std::string format_double(double v);

}  // namespace hprs

#endif  // HPRS_EXPR_HPP
