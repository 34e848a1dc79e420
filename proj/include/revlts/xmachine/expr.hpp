#pragma once

// Arithmetic expressions and predicates over memory variables.
//
//   or   ::= and ('||' and)*
//   and  ::= not ('&&' not)*
//   not  ::= '!' not | cmp
//   cmp  ::= sum (('=='|'!='|'<'|'<='|'>'|'>=') sum)?
//   sum  ::= prod (('+'|'-') prod)*       '-' is truncated subtraction
//   prod ::= atom ('*' atom)*
//   atom ::= number | identifier | '(' or ')'
//
// Predicates evaluate to 0 or 1.

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "../text.hpp"
#include "memory.hpp"

namespace revlts::xm {

class expr {
public:
    enum class op { constant, variable, add, sub, mul, eq, ne, lt, le, gt, ge, conj, disj, neg };

    static expr constant(value v) {
        auto n = std::make_shared<node>();
        n->o = op::constant;
        n->v = v;
        return expr(std::move(n));
    }
    static expr variable(std::string name) {
        auto n = std::make_shared<node>();
        n->o = op::variable;
        n->name = std::move(name);
        return expr(std::move(n));
    }
    static expr binary(op o, expr a, expr b) {
        auto n = std::make_shared<node>();
        n->o = o;
        n->args = {std::move(a), std::move(b)};
        return expr(std::move(n));
    }
    static expr negation(expr a) {
        auto n = std::make_shared<node>();
        n->o = op::neg;
        n->args = {std::move(a)};
        return expr(std::move(n));
    }

    op kind() const { return n_->o; }

    bool is_predicate() const {
        switch (n_->o) {
        case op::constant:
        case op::variable:
        case op::add:
        case op::sub:
        case op::mul: return false;
        default: return true;
        }
    }

    value eval(const memory& m) const {
        const auto& a = n_->args;
        switch (n_->o) {
        case op::constant: return n_->v;
        case op::variable: return m.get(n_->name);
        case op::add: return a[0].eval(m) + a[1].eval(m);
        case op::sub: {
            value x = a[0].eval(m), y = a[1].eval(m);
            return x >= y ? x - y : 0;
        }
        case op::mul: return a[0].eval(m) * a[1].eval(m);
        case op::eq: return a[0].eval(m) == a[1].eval(m);
        case op::ne: return a[0].eval(m) != a[1].eval(m);
        case op::lt: return a[0].eval(m) < a[1].eval(m);
        case op::le: return a[0].eval(m) <= a[1].eval(m);
        case op::gt: return a[0].eval(m) > a[1].eval(m);
        case op::ge: return a[0].eval(m) >= a[1].eval(m);
        case op::conj: return a[0].eval(m) && a[1].eval(m);
        case op::disj: return a[0].eval(m) || a[1].eval(m);
        case op::neg: return !a[0].eval(m);
        }
        return 0;
    }

    void variables(std::set<std::string>& out) const {
        if (n_->o == op::variable) out.insert(n_->name);
        for (const auto& a : n_->args) a.variables(out);
    }
    std::set<std::string> variables() const {
        std::set<std::string> out;
        variables(out);
        return out;
    }

    std::string text() const {
        static const char* syms[] = {"", "", "+", "-", "*", "==", "!=", "<", "<=", ">", ">=", "&&", "||", "!"};
        const auto& a = n_->args;
        switch (n_->o) {
        case op::constant: return std::to_string(n_->v);
        case op::variable: return n_->name;
        case op::neg: return "!(" + a[0].text() + ")";
        default: return "(" + a[0].text() + " " + syms[static_cast<int>(n_->o)] + " " + a[1].text() + ")";
        }
    }

private:
    struct node {
        op o = op::constant;
        value v = 0;
        std::string name;
        std::vector<expr> args;
    };

    explicit expr(std::shared_ptr<const node> n) : n_(std::move(n)) {}

    std::shared_ptr<const node> n_;
};

class expr_parser {
public:
    explicit expr_parser(std::string_view src) : src_(src) {}

    expr parse() {
        auto e = disj();
        skip();
        if (at_ != src_.size()) throw parse_error("unexpected '" + std::string(1, src_[at_]) + "' in expression", at_);
        return e;
    }

private:
    void skip() {
        while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
    }
    bool eat(std::string_view s) {
        skip();
        if (src_.substr(at_, s.size()) == s) {
            at_ += s.size();
            return true;
        }
        return false;
    }

    static void want(const expr& e, bool predicate, std::size_t pos) {
        if (e.is_predicate() != predicate)
            throw parse_error(predicate ? "expected a predicate" : "expected a numeric expression", pos);
    }

    expr disj() {
        std::size_t pos = at_;
        auto e = conj();
        while (eat("||")) {
            auto r = conj();
            want(e, true, pos);
            want(r, true, pos);
            e = expr::binary(expr::op::disj, std::move(e), std::move(r));
        }
        return e;
    }
    expr conj() {
        std::size_t pos = at_;
        auto e = neg();
        while (eat("&&")) {
            auto r = neg();
            want(e, true, pos);
            want(r, true, pos);
            e = expr::binary(expr::op::conj, std::move(e), std::move(r));
        }
        return e;
    }
    expr neg() {
        skip();
        std::size_t pos = at_;
        if (src_.substr(at_, 1) == "!" && src_.substr(at_, 2) != "!=") {
            ++at_;
            auto e = neg();
            want(e, true, pos);
            return expr::negation(std::move(e));
        }
        return cmp();
    }
    expr cmp() {
        std::size_t pos = at_;
        auto e = sum();
        static const std::pair<std::string_view, expr::op> ops[] = {
            {"==", expr::op::eq}, {"!=", expr::op::ne}, {"<=", expr::op::le},
            {">=", expr::op::ge}, {"<", expr::op::lt},  {">", expr::op::gt}};
        for (const auto& [sym, o] : ops) {
            if (eat(sym)) {
                auto r = sum();
                want(e, false, pos);
                want(r, false, pos);
                return expr::binary(o, std::move(e), std::move(r));
            }
        }
        return e;
    }
    expr sum() {
        std::size_t pos = at_;
        auto e = prod();
        for (;;) {
            expr::op o;
            if (eat("+")) o = expr::op::add;
            else if (eat("-")) o = expr::op::sub;
            else return e;
            auto r = prod();
            want(e, false, pos);
            want(r, false, pos);
            e = expr::binary(o, std::move(e), std::move(r));
        }
    }
    expr prod() {
        std::size_t pos = at_;
        auto e = atom();
        while (eat("*")) {
            auto r = atom();
            want(e, false, pos);
            want(r, false, pos);
            e = expr::binary(expr::op::mul, std::move(e), std::move(r));
        }
        return e;
    }
    expr atom() {
        skip();
        if (at_ >= src_.size()) throw parse_error("unexpected end of expression", at_);
        char c = src_[at_];
        if (c == '(') {
            ++at_;
            auto e = disj();
            if (!eat(")")) throw parse_error("expected ')'", at_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            value v = 0;
            while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_])))
                v = v * 10 + static_cast<value>(src_[at_++] - '0');
            return expr::constant(v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = at_;
            while (at_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[at_])) || src_[at_] == '_')) ++at_;
            return expr::variable(std::string(src_.substr(start, at_ - start)));
        }
        throw parse_error("unexpected '" + std::string(1, c) + "' in expression", at_);
    }

    std::string_view src_;
    std::size_t at_ = 0;
};

inline expr parse_expr(std::string_view text) { return expr_parser(text).parse(); }

}  // namespace revlts::xm
