#pragma once

// Recursive-descent parser for processes and refined labels. `#` starts a
// comment running to the end of the line.

#include <cctype>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "../text.hpp"
#include "label.hpp"
#include "process.hpp"

namespace revlts::ccs {

class parser {
public:
    explicit parser(std::string_view src) : src_(src) { advance(); }

    process parse_process() {
        auto p = par();
        expect_end();
        return p;
    }

    label parse_label() {
        auto u = refined_label();
        expect_end();
        return u;
    }

private:
    enum class tok { ident, number, sym, end };

    struct token {
        tok type = tok::end;
        std::string text;
        std::size_t pos = 0;
    };

    void advance() {
        for (;;) {
            while (at_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[at_]))) ++at_;
            if (at_ < src_.size() && src_[at_] == '#') {
                while (at_ < src_.size() && src_[at_] != '\n') ++at_;
                continue;
            }
            break;
        }
        cur_ = token{};
        cur_.pos = at_;
        if (at_ >= src_.size()) return;
        char c = src_[at_];
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = at_;
            while (at_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[at_])) || src_[at_] == '_')) ++at_;
            cur_.type = tok::ident;
            cur_.text = std::string(src_.substr(start, at_ - start));
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = at_;
            while (at_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[at_]))) ++at_;
            cur_.type = tok::number;
            cur_.text = std::string(src_.substr(start, at_ - start));
        } else {
            cur_.type = tok::sym;
            cur_.text = std::string(1, c);
            ++at_;
        }
    }

    [[noreturn]] void fail(std::initializer_list<std::string_view> expected) const {
        std::string msg = "expected ";
        bool first = true;
        for (auto e : expected) {
            msg += first ? "" : " or ";
            msg += "'" + std::string(e) + "'";
            first = false;
        }
        msg += cur_.type == tok::end ? " but reached end of input" : " but found '" + cur_.text + "'";
        throw parse_error(msg, cur_.pos);
    }

    bool is_sym(char c) const { return cur_.type == tok::sym && cur_.text[0] == c; }
    bool is_word(std::string_view w) const { return cur_.type == tok::ident && cur_.text == w; }

    void expect_sym(char c) {
        if (!is_sym(c)) fail({std::string_view(&c, 1)});
        advance();
    }
    void expect_end() const {
        if (cur_.type != tok::end) fail({"end of input"});
    }

    static bool keyword(const std::string& s) { return s == "nu" || s == "rec" || s == "pick" || s == "tau"; }

    bool at_channel() const {
        return cur_.type == tok::ident && std::islower(static_cast<unsigned char>(cur_.text[0])) && !keyword(cur_.text);
    }
    bool at_variable() const {
        return cur_.type == tok::ident && std::isupper(static_cast<unsigned char>(cur_.text[0]));
    }
    bool at_action() const { return is_sym('~') || at_channel(); }

    std::string channel_name() {
        if (!at_channel()) fail({"channel name (lowercase identifier)"});
        auto name = cur_.text;
        advance();
        return name;
    }
    std::string variable_name() {
        if (!at_variable()) fail({"process variable (uppercase identifier)"});
        auto name = cur_.text;
        advance();
        return name;
    }

    channel resolve_channel(const std::string& name) const {
        for (std::size_t i = chans_.size(); i-- > 0;)
            if (chans_[i] == name) return channel::at(chans_.size() - 1 - i);
        return channel::free(name);
    }
    process resolve_variable(const std::string& name) const {
        for (std::size_t i = vars_.size(); i-- > 0;)
            if (vars_[i] == name) return process::bound_var(vars_.size() - 1 - i);
        return process::free_var(name);
    }

    process par() {
        auto p = choice();
        while (is_sym('|')) {
            advance();
            p = process::par(std::move(p), choice());
        }
        return p;
    }

    process choice() {
        if (!at_action()) return atom();
        std::vector<std::pair<action, process>> items;
        items.push_back(guarded());
        while (is_sym('+')) {
            advance();
            if (!at_action()) fail({"~", "channel name"});
            items.push_back(guarded());
        }
        return process::sum(std::move(items));
    }

    std::pair<action, process> guarded() {
        bool output = false;
        if (is_sym('~')) {
            output = true;
            advance();
        }
        auto chan = resolve_channel(channel_name());
        action a = output ? action::output(chan) : action::input(chan);
        if (!is_sym('.')) return {a, process::nil()};
        advance();
        return {a, continuation()};
    }

    process continuation() {
        if (at_action()) {
            auto g = guarded();
            return process::prefix(std::move(g.first), std::move(g.second));
        }
        return atom();
    }

    process atom() {
        if (cur_.type == tok::number) {
            if (cur_.text != "0") fail({"0"});
            advance();
            return process::nil();
        }
        if (at_variable()) return resolve_variable(variable_name());
        if (is_sym('(')) {
            advance();
            auto p = par();
            expect_sym(')');
            return p;
        }
        if (is_word("nu")) {
            advance();
            chans_.push_back(channel_name());
            expect_sym('.');
            auto body = par();
            chans_.pop_back();
            return process::restrict(std::move(body));
        }
        if (is_word("rec")) {
            advance();
            vars_.push_back(variable_name());
            expect_sym('.');
            auto body = par();
            vars_.pop_back();
            return process::rec(std::move(body));
        }
        fail({"0", "(", "nu", "rec", "process variable", "action"});
    }

    label refined_label() {
        std::size_t start = cur_.pos;
        if (is_word("pick")) {
            advance();
            expect_sym('(');
            if (cur_.type != tok::number) fail({"summand index"});
            std::size_t index = std::stoul(cur_.text);
            advance();
            expect_sym(')');
            expect_sym('{');
            std::vector<summand> items;
            auto add = [&] {
                auto g = guarded();
                items.push_back({std::move(g.first), std::make_shared<const process>(std::move(g.second))});
            };
            add();
            while (is_sym('+')) {
                advance();
                add();
            }
            expect_sym('}');
            if (index == 0 || index > items.size())
                throw parse_error("summand index " + std::to_string(index) + " out of range", start);
            return label::choice(std::move(items), index);
        }
        if (is_sym('(')) {
            advance();
            std::optional<label> lhs, rhs;
            if (is_sym('*')) advance();
            else lhs = refined_label();
            expect_sym('|');
            if (is_sym('*')) advance();
            else rhs = refined_label();
            expect_sym(')');
            if (lhs && rhs) {
                auto a = interpret(*lhs);
                auto b = interpret(*rhs);
                if (!a || !b || !a->complements(*b))
                    throw parse_error("synchronised sides must perform complementary actions", start);
                return label::sync(std::move(*lhs), std::move(*rhs));
            }
            if (lhs) return label::left(std::move(*lhs));
            if (rhs) return label::right(std::move(*rhs));
            throw parse_error("a parallel label needs at least one moving side", start);
        }
        if (is_word("nu")) {
            advance();
            chans_.push_back(channel_name());
            expect_sym('.');
            expect_sym('(');
            auto u = refined_label();
            expect_sym(')');
            chans_.pop_back();
            auto out = label::restrict(std::move(u));
            if (!interpret(out)) throw parse_error("restricted channel is used by the inner action", start);
            return out;
        }
        if (is_word("rec")) {
            advance();
            vars_.push_back(variable_name());
            expect_sym('.');
            auto body = choice();
            vars_.pop_back();
            return label::unfold(process::rec(std::move(body)));
        }
        fail({"pick", "(", "nu", "rec"});
    }

    std::string_view src_;
    std::size_t at_ = 0;
    token cur_;
    std::vector<std::string> chans_;
    std::vector<std::string> vars_;
};

inline process parse_process(std::string_view text) { return parser(text).parse_process(); }
inline label parse_label(std::string_view text) { return parser(text).parse_label(); }

}  // namespace revlts::ccs
