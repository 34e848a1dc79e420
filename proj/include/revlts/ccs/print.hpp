#pragma once

// Concrete syntax for processes.
//
//   P ::= P | P        parallel, left associative, loosest
//       | g + ... + g  guarded sum
//       | nu a. P      extends as far right as possible
//       | rec X. P     extends as far right as possible
//       | 0 | X | (P)
//   g ::= a.P' | ~a.P' | a      (a alone is a.0; P' binds tighter than +)
//
// The printer parenthesizes binders that are prefix continuations, so
// a.(rec X. b.X) rather than a.rec X. b.X; the parser accepts both.
//
// Binder names are generated deterministically from the nameless form, so
// printing is injective and parse(pretty(p)) == p.

#include <set>
#include <string>
#include <vector>

#include "process.hpp"

namespace revlts::ccs {

class naming {
public:
    naming() = default;
    naming(std::set<std::string> free_chans, std::set<std::string> free_vars)
        : avoid_chans_(std::move(free_chans)), avoid_vars_(std::move(free_vars)) {}

    std::string channel_name(const channel& c) const {
        if (!c.bound) return c.name;
        if (c.index >= chans_.size()) return "#" + std::to_string(c.index - chans_.size());
        return chans_[chans_.size() - 1 - c.index];
    }
    std::string var_name(const process& v) const {
        if (!v.var_bound()) return v.var_name();
        if (v.var_index() >= vars_.size()) return "#" + std::to_string(v.var_index() - vars_.size());
        return vars_[vars_.size() - 1 - v.var_index()];
    }

    std::string push_channel() {
        static const std::string letters = "abcdefghijklmnopqrstuvwxyz";
        for (std::size_t round = 0;; ++round) {
            for (char c : letters) {
                std::string cand(1, c);
                if (round) cand += std::to_string(round);
                if (usable(cand, avoid_chans_, chans_)) {
                    chans_.push_back(cand);
                    return cand;
                }
            }
        }
    }
    std::string push_var() {
        static const std::string letters = "XYZWVUTSRQPONMLKJIHGFEDCBA";
        for (std::size_t round = 0;; ++round) {
            for (char c : letters) {
                std::string cand(1, c);
                if (round) cand += std::to_string(round);
                if (usable(cand, avoid_vars_, vars_)) {
                    vars_.push_back(cand);
                    return cand;
                }
            }
        }
    }
    void pop_channel() { chans_.pop_back(); }
    void pop_var() { vars_.pop_back(); }

    void avoid_channels(const std::set<std::string>& names) { avoid_chans_.insert(names.begin(), names.end()); }
    void avoid_variables(const std::set<std::string>& names) { avoid_vars_.insert(names.begin(), names.end()); }

private:
    static bool usable(const std::string& cand, const std::set<std::string>& avoid,
                       const std::vector<std::string>& scope) {
        if (avoid.count(cand)) return false;
        for (const auto& s : scope)
            if (s == cand) return false;
        return true;
    }

    std::set<std::string> avoid_chans_;
    std::set<std::string> avoid_vars_;
    std::vector<std::string> chans_;
    std::vector<std::string> vars_;
};

enum class precedence { par = 0, choice = 1, prefix = 2 };

inline std::string action_text(const action& a, const naming& env) {
    switch (a.k) {
    case action::kind::input: return env.channel_name(a.chan);
    case action::kind::output: return "~" + env.channel_name(a.chan);
    case action::kind::tau: break;
    }
    return "tau";
}

// `rightmost`: nothing follows in the enclosing text, so a binder may extend
// to the end without parentheses.
inline void print(std::string& out, const process& p, naming& env, precedence level, bool rightmost) {
    auto open = [&](bool paren) {
        if (paren) out += '(';
    };
    auto close = [&](bool paren) {
        if (paren) out += ')';
    };
    switch (p.k()) {
    case process::kind::sum: {
        const auto& items = p.summands();
        if (items.empty()) {
            out += '0';
            return;
        }
        bool paren = items.size() > 1 && level == precedence::prefix;
        if (paren) rightmost = true;
        open(paren);
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i) out += " + ";
            out += action_text(items[i].act, env);
            out += '.';
            print(out, *items[i].cont, env, precedence::prefix, rightmost && i + 1 == items.size());
        }
        close(paren);
        return;
    }
    case process::kind::par: {
        bool paren = level != precedence::par;
        if (paren) rightmost = true;
        open(paren);
        print(out, p.left(), env, precedence::par, false);
        out += " | ";
        print(out, p.right(), env, precedence::choice, rightmost);
        close(paren);
        return;
    }
    case process::kind::restrict:
    case process::kind::rec: {
        bool paren = !rightmost || level == precedence::prefix;
        open(paren);
        bool is_nu = p.k() == process::kind::restrict;
        out += is_nu ? "nu " : "rec ";
        out += is_nu ? env.push_channel() : env.push_var();
        out += ". ";
        print(out, p.body(), env, precedence::par, true);
        if (is_nu) env.pop_channel();
        else env.pop_var();
        close(paren);
        return;
    }
    case process::kind::var: out += env.var_name(p); return;
    }
}

inline naming naming_for(const process& p) {
    std::set<std::string> chans, vars;
    free_channels(p, chans);
    free_variables(p, vars);
    return naming(std::move(chans), std::move(vars));
}

inline std::string pretty(const process& p) {
    auto env = naming_for(p);
    std::string out;
    print(out, p, env, precedence::par, true);
    return out;
}

}  // namespace revlts::ccs
