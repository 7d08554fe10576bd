#include "hprs/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "hprs/error.hpp"

namespace hprs {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::SyntaxError: return "SyntaxError";
        case Errc::UnknownVariable: return "UnknownVariable";
        case Errc::DuplicateName: return "DuplicateName";
        case Errc::NonNormalizablePredicate: return "NonNormalizablePredicate";
        case Errc::TriviallySatisfied: return "TriviallySatisfied";
        case Errc::TriviallyViolated: return "TriviallyViolated";
        case Errc::UnboundedSignal: return "UnboundedSignal";
        case Errc::NoTarget: return "NoTarget";
        case Errc::MultipleTargets: return "MultipleTargets";
        case Errc::EmptyTask: return "EmptyTask";
        case Errc::UnknownRequirement: return "UnknownRequirement";
        case Errc::EmptyTrace: return "EmptyTrace";
        case Errc::NotComfort: return "NotComfort";
        case Errc::EmptyInput: return "EmptyInput";
        case Errc::WeightDimensionMismatch: return "WeightDimensionMismatch";
        case Errc::EmptyWindow: return "EmptyWindow";
        case Errc::AlreadyTerminated: return "AlreadyTerminated";
        case Errc::InvalidAction: return "InvalidAction";
        case Errc::NonStochasticRow: return "NonStochasticRow";
        case Errc::NonDiscreteEnvironment: return "NonDiscreteEnvironment";
        case Errc::BadConfig: return "BadConfig";
        case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

std::string Diagnostic::str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Diagnostic& d) {
    os << (d.file.empty() ? "<input>" : d.file) << ':' << d.pos.line << ':' << d.pos.col << ": "
       << d.code << ": " << d.message;
    return os;
}

bool has_errors(const std::vector<Diagnostic>& diags) {
    return std::any_of(diags.begin(), diags.end(),
                       [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

double state_value(const StateSample& s, const std::string& name) {
    auto it = s.find(name);
    if (it == s.end()) {
        throw Error(Errc::UnknownVariable, "state does not bind variable '" + name + "'");
    }
    return it->second;
}

Interval iadd(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval isub(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval imul(Interval a, Interval b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return {std::min({p1, p2, p3, p4}), std::max({p1, p2, p3, p4})};
}

Interval idiv(Interval a, Interval b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) {
        throw Error(Errc::UnboundedSignal, "division by an interval containing zero");
    }
    return imul(a, {1.0 / b.hi, 1.0 / b.lo});
}

Interval ineg(Interval a) { return {-a.hi, -a.lo}; }

Interval iabs(Interval a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return {-a.hi, -a.lo};
    return {0.0, std::max(-a.lo, a.hi)};
}

Interval imin(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::min(a.hi, b.hi)}; }
Interval imax(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

ExprPtr Expr::constant(double value) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->op_ = Op::Const;
    e->value_ = value;
    return e;
}

ExprPtr Expr::variable(std::string name, SourcePos pos) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->op_ = Op::Var;
    e->var_ = std::move(name);
    e->pos_ = pos;
    return e;
}

ExprPtr Expr::unary(Op op, ExprPtr operand) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->op_ = op;
    e->lhs_ = std::move(operand);
    return e;
}

ExprPtr Expr::binary(Op op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::shared_ptr<Expr>(new Expr());
    e->op_ = op;
    e->lhs_ = std::move(lhs);
    e->rhs_ = std::move(rhs);
    return e;
}

double Expr::eval(const StateSample& s) const {
    switch (op_) {
        case Op::Const: return value_;
        case Op::Var: return state_value(s, var_);
        case Op::Neg: return -lhs_->eval(s);
        case Op::Abs: return std::fabs(lhs_->eval(s));
        case Op::Add: return lhs_->eval(s) + rhs_->eval(s);
        case Op::Sub: return lhs_->eval(s) - rhs_->eval(s);
        case Op::Mul: return lhs_->eval(s) * rhs_->eval(s);
        case Op::Div: return lhs_->eval(s) / rhs_->eval(s);
        case Op::Min: return std::min(lhs_->eval(s), rhs_->eval(s));
        case Op::Max: return std::max(lhs_->eval(s), rhs_->eval(s));
    }
    return 0.0;
}

void Expr::collect_variables(std::vector<std::string>& out) const {
    switch (op_) {
        case Op::Const: return;
        case Op::Var:
            if (std::find(out.begin(), out.end(), var_) == out.end()) out.push_back(var_);
            return;
        default:
            if (lhs_) lhs_->collect_variables(out);
            if (rhs_) rhs_->collect_variables(out);
    }
}

bool Expr::structurally_equal(const Expr& other) const {
    if (op_ != other.op_) return false;
    switch (op_) {
        case Op::Const: return value_ == other.value_;
        case Op::Var: return var_ == other.var_;
        default:
            if (lhs_ && !(other.lhs_ && lhs_->structurally_equal(*other.lhs_))) return false;
            if (rhs_ && !(other.rhs_ && rhs_->structurally_equal(*other.rhs_))) return false;
            return true;
    }
}

namespace {

// Higher binds tighter. Add/Sub = 1, Mul/Div = 2, unary minus = 3.
int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Add:
        case Expr::Op::Sub: return 1;
        case Expr::Op::Mul:
        case Expr::Op::Div: return 2;
        case Expr::Op::Neg: return 3;
        default: return 4;
    }
}

}  // namespace

void Expr::print_prec(std::ostream& os, int parent_prec) const {
    const int prec = precedence(op_);
    switch (op_) {
        case Op::Const:
            if (value_ < 0) {
                os << '(' << format_double(value_) << ')';
            } else {
                os << format_double(value_);
            }
            return;
        case Op::Var: os << var_; return;
        case Op::Abs:
            os << "abs(";
            lhs_->print_prec(os, 0);
            os << ')';
            return;
        case Op::Min:
        case Op::Max:
            os << (op_ == Op::Min ? "min(" : "max(");
            lhs_->print_prec(os, 0);
            os << ", ";
            rhs_->print_prec(os, 0);
            os << ')';
            return;
        case Op::Neg:
            if (prec < parent_prec) os << '(';
            os << '-';
            lhs_->print_prec(os, prec + 1);
            if (prec < parent_prec) os << ')';
            return;
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div: {
            const bool paren = prec < parent_prec;
            if (paren) os << '(';
            lhs_->print_prec(os, prec);
            switch (op_) {
                case Op::Add: os << " + "; break;
                case Op::Sub: os << " - "; break;
                case Op::Mul: os << " * "; break;
                default: os << " / "; break;
            }
            // Right operand needs one level more so `a - (b - c)` keeps parens.
            rhs_->print_prec(os, prec + 1);
            if (paren) os << ')';
            return;
        }
    }
}

void Expr::print(std::ostream& os) const { print_prec(os, 0); }

std::string Expr::str() const {
    std::ostringstream os;
    print(os);
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
    e.print(os);
    return os;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace hprs
