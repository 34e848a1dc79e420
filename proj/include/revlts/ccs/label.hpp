#pragma once

// Refined CCS labels: derivation-shaped labels that make the transition
// relation deterministic and co-deterministic while staying invariant under
// permutation of concurrent steps.
//
//   u ::= pick(i){a1.P1 + ... + an.Pn}    the i-th summand of a sum fired
//       | (u|*) | (*|u)                   one side of a parallel moved
//       | (u|v)                           both sides synchronised
//       | nu a.(u)                        move under a restriction
//       | rec X. P                        unfolding of rec X. P

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "print.hpp"
#include "process.hpp"

namespace revlts::ccs {

class label {
public:
    enum class kind { choice, left, right, sync, restrict, unfold };

    // `index` is 1-based.
    static label choice(std::vector<summand> summands, std::size_t index) {
        if (index == 0 || index > summands.size()) throw std::invalid_argument("choice index out of range");
        node n;
        n.k = kind::choice;
        n.summands = std::move(summands);
        n.index = index;
        return make(std::move(n));
    }
    static label left(label u) { return unary(kind::left, std::move(u)); }
    static label right(label u) { return unary(kind::right, std::move(u)); }
    static label sync(label u, label v) {
        node n;
        n.k = kind::sync;
        n.children = {std::move(u), std::move(v)};
        return make(std::move(n));
    }
    static label restrict(label u) { return unary(kind::restrict, std::move(u)); }
    // The label of unfolding `rec`, which must be a rec process.
    static label unfold(process rec) {
        if (rec.k() != process::kind::rec) throw std::invalid_argument("unfold label needs a rec process");
        node n;
        n.k = kind::unfold;
        n.procs = {std::move(rec)};
        return make(std::move(n));
    }

    kind k() const { return n_->k; }
    const std::vector<summand>& summands() const { return n_->summands; }
    std::size_t index() const { return n_->index; }
    const summand& picked() const { return n_->summands.at(n_->index - 1); }
    const label& child() const { return n_->children.at(0); }
    const label& first() const { return n_->children.at(0); }
    const label& second() const { return n_->children.at(1); }
    const process& recursion() const { return n_->procs.at(0); }

    const std::string& key() const { return n_->key; }
    // Canonical serialization; labels are ordered by it.
    const std::string& text() const { return n_->text; }
    std::size_t hash() const { return n_->hash; }

    friend bool operator==(const label& a, const label& b) {
        return a.n_ == b.n_ || (a.n_->hash == b.n_->hash && a.n_->key == b.n_->key);
    }
    friend bool operator<(const label& a, const label& b) { return a.text() < b.text(); }

    void collect_free_channels(std::set<std::string>& out) const {
        for (const auto& s : n_->summands) {
            if (!s.act.chan.bound) out.insert(s.act.chan.name);
            free_channels(*s.cont, out);
        }
        for (const auto& p : n_->procs) free_channels(p, out);
        for (const auto& c : n_->children) c.collect_free_channels(out);
    }
    void collect_free_variables(std::set<std::string>& out) const {
        for (const auto& s : n_->summands) free_variables(*s.cont, out);
        for (const auto& p : n_->procs) free_variables(p, out);
        for (const auto& c : n_->children) c.collect_free_variables(out);
    }

    void print(std::string& out, naming& env) const {
        switch (k()) {
        case kind::choice:
            out += "pick(" + std::to_string(index()) + "){";
            for (std::size_t i = 0; i < summands().size(); ++i) {
                if (i) out += " + ";
                out += action_text(summands()[i].act, env);
                out += '.';
                ccs::print(out, *summands()[i].cont, env, precedence::prefix, i + 1 == summands().size());
            }
            out += '}';
            return;
        case kind::left:
            out += '(';
            child().print(out, env);
            out += "|*)";
            return;
        case kind::right:
            out += "(*|";
            child().print(out, env);
            out += ')';
            return;
        case kind::sync:
            out += '(';
            first().print(out, env);
            out += '|';
            second().print(out, env);
            out += ')';
            return;
        case kind::restrict:
            out += "nu " + env.push_channel() + ".(";
            child().print(out, env);
            out += ')';
            env.pop_channel();
            return;
        case kind::unfold:
            out += "rec " + env.push_var() + ". ";
            ccs::print(out, recursion().body(), env, precedence::choice, false);
            env.pop_var();
            return;
        }
    }

private:
    struct node {
        kind k = kind::choice;
        std::vector<summand> summands;
        std::size_t index = 0;
        std::vector<label> children;
        std::vector<process> procs;
        std::string key;
        std::string text;
        std::size_t hash = 0;
    };

    explicit label(std::shared_ptr<const node> n) : n_(std::move(n)) {}

    static label unary(kind k, label u) {
        node n;
        n.k = k;
        n.children = {std::move(u)};
        return make(std::move(n));
    }

    static label make(node n) {
        switch (n.k) {
        case kind::choice:
            n.key = "C" + std::to_string(n.index) + "[";
            for (std::size_t i = 0; i < n.summands.size(); ++i) {
                if (i) n.key += ';';
                n.key += n.summands[i].act.key() + "." + n.summands[i].cont->key();
            }
            n.key += "]";
            break;
        case kind::left: n.key = "L(" + n.children[0].key() + ")"; break;
        case kind::right: n.key = "R(" + n.children[0].key() + ")"; break;
        case kind::sync: n.key = "Y(" + n.children[0].key() + "," + n.children[1].key() + ")"; break;
        case kind::restrict: n.key = "N(" + n.children[0].key() + ")"; break;
        case kind::unfold: n.key = "U(" + n.procs[0].key() + ")"; break;
        }
        n.hash = std::hash<std::string>{}(n.key);
        auto owned = std::make_shared<node>(std::move(n));
        label out(owned);
        std::set<std::string> chans, vars;
        out.collect_free_channels(chans);
        out.collect_free_variables(vars);
        naming env(std::move(chans), std::move(vars));
        std::string text;
        out.print(text, env);
        owned->text = std::move(text);
        return out;
    }

    std::shared_ptr<const node> n_;
};

// The standard CCS action a refined label stands for; absent when a
// restriction hides the action performed underneath it.
inline std::optional<action> interpret(const label& u) {
    switch (u.k()) {
    case label::kind::choice: return u.picked().act;
    case label::kind::unfold: return action::tau();
    case label::kind::left:
    case label::kind::right: return interpret(u.child());
    case label::kind::sync:
        if (!interpret(u.first()) || !interpret(u.second())) return std::nullopt;
        return action::tau();
    case label::kind::restrict: {
        auto a = interpret(u.child());
        if (!a) return std::nullopt;
        if (a->k == action::kind::tau || !a->chan.bound) return a;
        if (a->chan.index == 0) return std::nullopt;
        a->chan = channel::at(a->chan.index - 1);
        return a;
    }
    }
    return std::nullopt;
}

// u and v act on separate subprocesses. An absent side (the * slot of a
// parallel label) is independent of everything, including another absent
// side.
inline bool independent(const label& u, const label& v) {
    auto is_par = [](const label& x) {
        return x.k() == label::kind::left || x.k() == label::kind::right || x.k() == label::kind::sync;
    };
    if (is_par(u) && is_par(v)) {
        auto slot = [](const label& x, int side) -> const label* {
            switch (x.k()) {
            case label::kind::left: return side == 0 ? &x.child() : nullptr;
            case label::kind::right: return side == 1 ? &x.child() : nullptr;
            default: return side == 0 ? &x.first() : &x.second();
            }
        };
        for (int side = 0; side < 2; ++side) {
            const label* a = slot(u, side);
            const label* b = slot(v, side);
            if (a && b && !independent(*a, *b)) return false;
        }
        return true;
    }
    if (u.k() == label::kind::restrict && v.k() == label::kind::restrict)
        return independent(u.child(), v.child());
    return false;
}

}  // namespace revlts::ccs

template <>
struct std::hash<revlts::ccs::label> {
    std::size_t operator()(const revlts::ccs::label& u) const { return u.hash(); }
};
