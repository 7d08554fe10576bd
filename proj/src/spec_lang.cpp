#include "hprs/spec_lang.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "hprs/error.hpp"

namespace hprs {

const char* class_keyword(RequirementClass c) {
    switch (c) {
        case RequirementClass::Safety: return "ensure";
        case RequirementClass::TargetAchieve: return "achieve";
        case RequirementClass::TargetConquer: return "conquer";
        case RequirementClass::Comfort: return "encourage";
    }
    return "?";
}

const char* class_label(RequirementClass c) {
    switch (c) {
        case RequirementClass::Safety: return "safety";
        case RequirementClass::TargetAchieve:
        case RequirementClass::TargetConquer: return "target";
        case RequirementClass::Comfort: return "comfort";
    }
    return "?";
}

bool is_target(RequirementClass c) {
    return c == RequirementClass::TargetAchieve || c == RequirementClass::TargetConquer;
}

const VarDecl* TaskSpecDraft::find_decl(const std::string& name) const {
    for (const auto& d : decls) {
        if (d.name == name) return &d;
    }
    return nullptr;
}

namespace {

enum class Tok {
    End,
    Ident,
    Number,
    String,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Pipe,
    Plus,
    Minus,
    Star,
    Slash,
    Ge,
    Gt,
    Le,
    Lt,
    EqEq,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    double number = 0.0;
    SourcePos pos;
};

struct LineLexResult {
    std::vector<Token> tokens;
    std::string error;  // empty on success
    SourcePos error_pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

LineLexResult lex_line(std::string_view line, int line_no) {
    LineLexResult out;
    size_t i = 0;
    auto pos = [&](size_t at) { return SourcePos{line_no, static_cast<int>(at) + 1}; };
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;  // comment to end of line
        Token t;
        t.pos = pos(i);
        if (ident_start(c)) {
            size_t j = i;
            while (j < line.size() && ident_char(line[j])) ++j;
            t.kind = Tok::Ident;
            t.text = std::string(line.substr(i, j - i));
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                   (c == '.' && i + 1 < line.size() &&
                    std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
            size_t j = i;
            while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
            if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
                size_t k = j + 1;
                if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
                if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
                    while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
                    j = k;
                }
            }
            const std::string text(line.substr(i, j - i));
            double value = 0.0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), value);
            if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
                out.error = "malformed number '" + text + "'";
                out.error_pos = t.pos;
                return out;
            }
            t.kind = Tok::Number;
            t.text = text;
            t.number = value;
            i = j;
        } else if (c == '"') {
            size_t j = i + 1;
            while (j < line.size() && line[j] != '"') ++j;
            if (j >= line.size()) {
                out.error = "unterminated string";
                out.error_pos = t.pos;
                return out;
            }
            t.kind = Tok::String;
            t.text = std::string(line.substr(i + 1, j - i - 1));
            i = j + 1;
        } else {
            switch (c) {
                case '(': t.kind = Tok::LParen; ++i; break;
                case ')': t.kind = Tok::RParen; ++i; break;
                case '[': t.kind = Tok::LBracket; ++i; break;
                case ']': t.kind = Tok::RBracket; ++i; break;
                case ',': t.kind = Tok::Comma; ++i; break;
                case ':': t.kind = Tok::Colon; ++i; break;
                case '|': t.kind = Tok::Pipe; ++i; break;
                case '+': t.kind = Tok::Plus; ++i; break;
                case '-': t.kind = Tok::Minus; ++i; break;
                case '*': t.kind = Tok::Star; ++i; break;
                case '/': t.kind = Tok::Slash; ++i; break;
                case '>':
                    if (i + 1 < line.size() && line[i + 1] == '=') {
                        t.kind = Tok::Ge;
                        i += 2;
                    } else {
                        t.kind = Tok::Gt;
                        ++i;
                    }
                    break;
                case '<':
                    if (i + 1 < line.size() && line[i + 1] == '=') {
                        t.kind = Tok::Le;
                        i += 2;
                    } else {
                        t.kind = Tok::Lt;
                        ++i;
                    }
                    break;
                case '=':
                    if (i + 1 < line.size() && line[i + 1] == '=') {
                        t.kind = Tok::EqEq;
                        i += 2;
                    } else {
                        out.error = "single '=' is not a comparison; use '=='";
                        out.error_pos = t.pos;
                        return out;
                    }
                    break;
                default:
                    out.error = std::string("unexpected character '") + c + "'";
                    out.error_pos = t.pos;
                    return out;
            }
        }
        out.tokens.push_back(std::move(t));
    }
    Token end;
    end.kind = Tok::End;
    end.pos = pos(line.size());
    out.tokens.push_back(end);
    return out;
}

// Recursive-descent parser over one lexed line.
class LineParser {
public:
    LineParser(std::vector<Token> tokens, std::string file)
        : tokens_(std::move(tokens)), file_(std::move(file)) {}

    const Token& peek() const { return tokens_[idx_]; }
    const Token& next() { return tokens_[std::min(idx_++, tokens_.size() - 1)]; }
    bool at_end() const { return peek().kind == Tok::End; }

    bool accept(Tok kind) {
        if (peek().kind == kind) {
            ++idx_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message, SourcePos pos,
                           Errc code = Errc::SyntaxError) const {
        throw ParseFailure{message, pos, code};
    }

    struct ParseFailure {
        std::string message;
        SourcePos pos;
        Errc code = Errc::SyntaxError;
    };

    Token expect(Tok kind, const char* what) {
        if (peek().kind != kind) fail(std::string("expected ") + what, peek().pos);
        return next();
    }

    double expect_number(const char* what) {
        bool neg = false;
        SourcePos pos = peek().pos;
        if (accept(Tok::Minus)) neg = true;
        if (peek().kind != Tok::Number) fail(std::string("expected ") + what, pos);
        double v = next().number;
        return neg ? -v : v;
    }

    // sum = term { (+|-) term }
    ExprPtr parse_sum() {
        ExprPtr e = parse_term();
        for (;;) {
            if (accept(Tok::Plus)) {
                e = Expr::binary(Expr::Op::Add, e, parse_term());
            } else if (accept(Tok::Minus)) {
                e = Expr::binary(Expr::Op::Sub, e, parse_term());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (accept(Tok::Star)) {
                e = Expr::binary(Expr::Op::Mul, e, parse_factor());
            } else if (accept(Tok::Slash)) {
                e = Expr::binary(Expr::Op::Div, e, parse_factor());
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_factor() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Number: {
                next();
                return Expr::constant(t.number);
            }
            case Tok::Minus: {
                next();
                return Expr::unary(Expr::Op::Neg, parse_factor());
            }
            case Tok::LParen: {
                next();
                ExprPtr e = parse_sum();
                expect(Tok::RParen, "')'");
                return e;
            }
            case Tok::Pipe: {
                next();
                ExprPtr e = parse_sum();
                expect(Tok::Pipe, "closing '|'");
                return Expr::unary(Expr::Op::Abs, e);
            }
            case Tok::Ident: {
                next();
                if (t.text == "abs") {
                    expect(Tok::LParen, "'(' after abs");
                    ExprPtr e = parse_sum();
                    expect(Tok::RParen, "')'");
                    return Expr::unary(Expr::Op::Abs, e);
                }
                if (t.text == "min" || t.text == "max") {
                    expect(Tok::LParen, t.text == "min" ? "'(' after min" : "'(' after max");
                    ExprPtr a = parse_sum();
                    expect(Tok::Comma, "','");
                    ExprPtr b = parse_sum();
                    expect(Tok::RParen, "')'");
                    return Expr::binary(t.text == "min" ? Expr::Op::Min : Expr::Op::Max, a, b);
                }
                return Expr::variable(t.text, t.pos);
            }
            default:
                fail("expected expression", t.pos);
        }
    }

    Comparison parse_comparison() {
        Comparison c;
        c.lhs = parse_sum();
        switch (peek().kind) {
            case Tok::Ge: c.op = ComparisonOp::Ge; break;
            case Tok::Gt: c.op = ComparisonOp::Gt; break;
            case Tok::Le: c.op = ComparisonOp::Le; break;
            case Tok::Lt: c.op = ComparisonOp::Lt; break;
            case Tok::EqEq: c.op = ComparisonOp::EqTol; break;
            default: fail("expected comparison operator", peek().pos);
        }
        next();
        c.rhs = parse_sum();
        if (c.op == ComparisonOp::EqTol) {
            if (!(peek().kind == Tok::Ident && peek().text == "tol")) {
                fail("equality requires a 'tol <eps>' annotation", peek().pos,
                     Errc::NonNormalizablePredicate);
            }
            next();
            c.tol = expect_number("tolerance value");
        }
        return c;
    }

private:
    std::vector<Token> tokens_;
    std::string file_;
    size_t idx_ = 0;
};

bool is_reserved_word(const std::string& s) {
    static const std::set<std::string> kw = {"var",     "in",  "ensure", "achieve", "conquer",
                                             "encourage", "tol", "bounds", "abs",     "min",
                                             "max"};
    return kw.count(s) > 0;
}

}  // namespace

ExprPtr normalize_comparison(const Comparison& c) {
    auto minus = [](const ExprPtr& a, const ExprPtr& b) -> ExprPtr {
        if (b->is_constant(0.0)) return a;  // keeps `f >= 0` round-trippable
        // identical operands fold to the constant zero signal; interval
        // arithmetic would otherwise widen x - x to a spurious range
        if (a->structurally_equal(*b)) return Expr::constant(0.0);
        return Expr::binary(Expr::Op::Sub, a, b);
    };
    switch (c.op) {
        case ComparisonOp::Ge:
        case ComparisonOp::Gt:
            return minus(c.lhs, c.rhs);
        case ComparisonOp::Le:
        case ComparisonOp::Lt:
            return minus(c.rhs, c.lhs);
        case ComparisonOp::EqTol: {
            if (!(c.tol > 0.0)) {
                throw Error(Errc::NonNormalizablePredicate, "equality tolerance must be positive");
            }
            return Expr::binary(Expr::Op::Sub, Expr::constant(c.tol),
                                Expr::unary(Expr::Op::Abs, minus(c.lhs, c.rhs)));
        }
    }
    throw Error(Errc::NonNormalizablePredicate, "unsupported comparison");
}

namespace {

Interval enclosure(const Expr& f, const std::vector<VarDecl>& decls) {
    switch (f.op()) {
        case Expr::Op::Const: return {f.value(), f.value()};
        case Expr::Op::Var: {
            for (const auto& d : decls) {
                if (d.name == f.var_name()) return {d.lo, d.hi};
            }
            throw Error(Errc::UnknownVariable, "undeclared variable '" + f.var_name() + "'");
        }
        case Expr::Op::Neg: return ineg(enclosure(*f.lhs(), decls));
        case Expr::Op::Abs: return iabs(enclosure(*f.lhs(), decls));
        case Expr::Op::Add: return iadd(enclosure(*f.lhs(), decls), enclosure(*f.rhs(), decls));
        case Expr::Op::Sub: return isub(enclosure(*f.lhs(), decls), enclosure(*f.rhs(), decls));
        case Expr::Op::Mul: return imul(enclosure(*f.lhs(), decls), enclosure(*f.rhs(), decls));
        case Expr::Op::Div: return idiv(enclosure(*f.lhs(), decls), enclosure(*f.rhs(), decls));
        case Expr::Op::Min: return imin(enclosure(*f.lhs(), decls), enclosure(*f.rhs(), decls));
        case Expr::Op::Max: return imax(enclosure(*f.lhs(), decls), enclosure(*f.rhs(), decls));
    }
    throw Error(Errc::UnboundedSignal, "unreachable expression kind");
}

}  // namespace

Interval infer_bounds(const Expr& f, const std::vector<VarDecl>& decls) {
    const Interval b = enclosure(f, decls);
    if (b.lo >= 0.0) {
        throw Error(Errc::TriviallySatisfied, "signal range [" + format_double(b.lo) + ", " +
                                                  format_double(b.hi) + "] never goes negative");
    }
    if (b.hi <= 0.0) {
        throw Error(Errc::TriviallyViolated, "signal range [" + format_double(b.lo) + ", " +
                                                 format_double(b.hi) + "] never reaches zero");
    }
    return b;
}

ParseResult parse_spec(std::string_view text, std::string_view filename) {
    ParseResult out;
    const std::string file(filename);

    auto diag = [&](Severity sev, const char* code, const std::string& msg, SourcePos pos) {
        out.diagnostics.push_back(Diagnostic{sev, code, msg, pos, file});
    };
    auto error = [&](Errc code, const std::string& msg, SourcePos pos) {
        diag(Severity::Error, errc_name(code), msg, pos);
    };

    struct PendingReq {
        RequirementSpec req;
        Comparison cmp;
    };
    std::vector<PendingReq> pending;

    int line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t eol = text.find('\n', start);
        std::string_view line = text.substr(start, eol == std::string_view::npos ? std::string_view::npos
                                                                                 : eol - start);
        ++line_no;
        start = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;

        auto lexed = lex_line(line, line_no);
        if (!lexed.error.empty()) {
            error(Errc::SyntaxError, lexed.error, lexed.error_pos);
            continue;
        }
        LineParser p(std::move(lexed.tokens), file);
        if (p.at_end()) continue;

        try {
            const Token head = p.next();
            if (head.kind != Tok::Ident) {
                p.fail("expected 'var' or a requirement keyword", head.pos);
            }
            if (head.text == "var") {
                VarDecl d;
                const Token name = p.expect(Tok::Ident, "variable name");
                if (is_reserved_word(name.text)) {
                    p.fail("'" + name.text + "' is a reserved word", name.pos);
                }
                d.name = name.text;
                d.pos = name.pos;
                const Token in_kw = p.expect(Tok::Ident, "'in'");
                if (in_kw.text != "in") p.fail("expected 'in'", in_kw.pos);
                p.expect(Tok::LBracket, "'['");
                d.lo = p.expect_number("lower bound");
                p.expect(Tok::Comma, "','");
                d.hi = p.expect_number("upper bound");
                p.expect(Tok::RBracket, "']'");
                if (!p.at_end()) p.fail("trailing tokens after declaration", p.peek().pos);
                if (!(d.lo < d.hi)) {
                    p.fail("variable range requires lo < hi", name.pos);
                }
                if (out.draft.find_decl(d.name) != nullptr) {
                    error(Errc::DuplicateName, "variable '" + d.name + "' already declared", name.pos);
                    continue;
                }
                out.draft.decls.push_back(std::move(d));
                continue;
            }

            RequirementClass cls;
            if (head.text == "ensure") {
                cls = RequirementClass::Safety;
            } else if (head.text == "achieve") {
                cls = RequirementClass::TargetAchieve;
            } else if (head.text == "conquer") {
                cls = RequirementClass::TargetConquer;
            } else if (head.text == "encourage") {
                cls = RequirementClass::Comfort;
            } else {
                p.fail("unknown keyword '" + head.text + "'", head.pos);
            }

            PendingReq pr;
            pr.req.cls = cls;
            pr.req.pos = head.pos;
            const Token name = p.expect(Tok::String, "quoted requirement name");
            pr.req.name = name.text;
            if (pr.req.name.empty()) p.fail("requirement name must be nonempty", name.pos);
            p.expect(Tok::Colon, "':'");
            pr.cmp = p.parse_comparison();

            if (p.peek().kind == Tok::Ident && p.peek().text == "bounds") {
                p.next();
                p.expect(Tok::LBracket, "'['");
                pr.req.bounds.lo = p.expect_number("lower bound");
                p.expect(Tok::Comma, "','");
                pr.req.bounds.hi = p.expect_number("upper bound");
                p.expect(Tok::RBracket, "']'");
                pr.req.explicit_bounds = true;
            }
            if (!p.at_end()) p.fail("trailing tokens after requirement", p.peek().pos);

            if (pr.cmp.op == ComparisonOp::Gt || pr.cmp.op == ComparisonOp::Lt) {
                diag(Severity::Warning, "StrictComparison",
                     "strict comparison is treated as its non-strict form", pr.req.pos);
            }
            if (pr.cmp.lhs->structurally_equal(*pr.cmp.rhs)) {
                diag(Severity::Warning, "TrivialPredicate",
                     "comparison of an expression with itself yields a constant signal",
                     pr.req.pos);
            }

            try {
                pr.req.signal = normalize_comparison(pr.cmp);
            } catch (const Error& e) {
                error(e.code(), e.what(), pr.req.pos);
                continue;
            }
            pending.push_back(std::move(pr));
        } catch (const LineParser::ParseFailure& f) {
            error(f.code, f.message, f.pos);
        } catch (const std::exception& e) {
            error(Errc::SyntaxError, e.what(), SourcePos{line_no, 1});
        }
    }

    // Second phase: resolve variables and establish signal bounds. Doing this
    // after the whole file is read lets requirements precede declarations.
    std::set<std::string> req_names;
    for (auto& pr : pending) {
        std::vector<std::string> vars;
        pr.req.signal->collect_variables(vars);
        bool resolved = true;
        for (const auto& v : vars) {
            if (out.draft.find_decl(v) == nullptr) {
                error(Errc::UnknownVariable, "undeclared variable '" + v + "'", pr.req.pos);
                resolved = false;
            }
        }
        if (!resolved) continue;

        if (!req_names.insert(pr.req.name).second) {
            error(Errc::DuplicateName, "requirement \"" + pr.req.name + "\" already defined",
                  pr.req.pos);
            continue;
        }

        if (!pr.req.explicit_bounds) {
            try {
                pr.req.bounds = infer_bounds(*pr.req.signal, out.draft.decls);
            } catch (const Error& e) {
                error(e.code(), e.what(), pr.req.pos);
                continue;
            }
        } else {
            if (pr.req.bounds.lo >= 0.0) {
                error(Errc::TriviallySatisfied,
                      "declared bounds [" + format_double(pr.req.bounds.lo) + ", " +
                          format_double(pr.req.bounds.hi) + "] never go negative",
                      pr.req.pos);
                continue;
            }
            if (pr.req.bounds.hi <= 0.0) {
                error(Errc::TriviallyViolated,
                      "declared bounds [" + format_double(pr.req.bounds.lo) + ", " +
                          format_double(pr.req.bounds.hi) + "] never reach zero",
                      pr.req.pos);
                continue;
            }
        }
        out.draft.requirements.push_back(std::move(pr.req));
    }
    return out;
}

std::string pretty_print(const TaskSpecDraft& draft) {
    std::ostringstream os;
    for (const auto& d : draft.decls) {
        os << "var " << d.name << " in [" << format_double(d.lo) << ", " << format_double(d.hi)
           << "]\n";
    }
    for (const auto& r : draft.requirements) {
        os << class_keyword(r.cls) << " \"" << r.name << "\": " << *r.signal << " >= 0";
        if (r.explicit_bounds) {
            os << " bounds [" << format_double(r.bounds.lo) << ", " << format_double(r.bounds.hi)
               << "]";
        }
        os << "\n";
    }
    return os.str();
}

bool draft_equal(const TaskSpecDraft& a, const TaskSpecDraft& b) {
    if (a.decls.size() != b.decls.size() || a.requirements.size() != b.requirements.size()) {
        return false;
    }
    for (size_t i = 0; i < a.decls.size(); ++i) {
        if (a.decls[i].name != b.decls[i].name || a.decls[i].lo != b.decls[i].lo ||
            a.decls[i].hi != b.decls[i].hi) {
            return false;
        }
    }
    for (size_t i = 0; i < a.requirements.size(); ++i) {
        const auto& x = a.requirements[i];
        const auto& y = b.requirements[i];
        if (x.cls != y.cls || x.name != y.name || x.bounds.lo != y.bounds.lo ||
            x.bounds.hi != y.bounds.hi || !x.signal->structurally_equal(*y.signal)) {
            return false;
        }
    }
    return true;
}

}  // namespace hprs
