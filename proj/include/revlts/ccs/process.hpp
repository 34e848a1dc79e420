#pragma once

// CCS processes in a nameless form: bound channels and bound process
// variables are de Bruijn indices, so alpha-equivalent processes are
// structurally equal. Free channels and variables keep their names.

#include <cstddef>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "../lts.hpp"

namespace revlts::ccs {

// A channel occurrence. A bound channel counts the restrictions between the
// occurrence and its binder (0 = innermost).
struct channel {
    bool bound = false;
    std::size_t index = 0;
    std::string name;

    static channel free(std::string n) { return {false, 0, std::move(n)}; }
    static channel at(std::size_t i) { return {true, i, {}}; }

    std::string key() const { return bound ? "#" + std::to_string(index) : name; }
    friend bool operator==(const channel&, const channel&) = default;
};

// Input a, output ~a, or the internal action tau. Prefixes are never tau.
struct action {
    enum class kind { input, output, tau };
    kind k = kind::tau;
    channel chan;

    static action input(channel c) { return {kind::input, std::move(c)}; }
    static action output(channel c) { return {kind::output, std::move(c)}; }
    static action tau() { return {}; }

    bool complements(const action& other) const {
        if (k == kind::tau || other.k == kind::tau || k == other.k) return false;
        return chan == other.chan;
    }
    std::string key() const {
        switch (k) {
        case kind::input: return "i:" + chan.key();
        case kind::output: return "o:" + chan.key();
        case kind::tau: break;
        }
        return "tau";
    }
    friend bool operator==(const action&, const action&) = default;
};

class process;

struct summand {
    action act;
    std::shared_ptr<const process> cont;  // never null
};

class process {
public:
    enum class kind { sum, par, restrict, var, rec };

    // 0 is the empty sum.
    static process nil() { return sum({}); }
    static process sum(std::vector<std::pair<action, process>> items) {
        node n;
        n.k = kind::sum;
        for (auto& [a, p] : items) n.summands.push_back({std::move(a), std::make_shared<const process>(std::move(p))});
        return make(std::move(n));
    }
    static process prefix(action a, process p) { return sum({{std::move(a), std::move(p)}}); }
    static process par(process l, process r) {
        node n;
        n.k = kind::par;
        n.children = {std::move(l), std::move(r)};
        return make(std::move(n));
    }
    // Restriction; channel index 0 in the body refers to this binder.
    static process restrict(process body) {
        node n;
        n.k = kind::restrict;
        n.children = {std::move(body)};
        return make(std::move(n));
    }
    static process free_var(std::string name) {
        node n;
        n.k = kind::var;
        n.var_name = std::move(name);
        return make(std::move(n));
    }
    static process bound_var(std::size_t index) {
        node n;
        n.k = kind::var;
        n.var_bound = true;
        n.var_index = index;
        return make(std::move(n));
    }
    // Recursion; variable index 0 in the body refers to this binder.
    static process rec(process body) {
        node n;
        n.k = kind::rec;
        n.children = {std::move(body)};
        return make(std::move(n));
    }

    kind k() const { return n_->k; }
    bool is_nil() const { return n_->k == kind::sum && n_->summands.empty(); }
    const std::vector<summand>& summands() const { return n_->summands; }
    const process& left() const { return n_->children.at(0); }
    const process& right() const { return n_->children.at(1); }
    const process& body() const { return n_->children.at(0); }
    bool var_bound() const { return n_->var_bound; }
    std::size_t var_index() const { return n_->var_index; }
    const std::string& var_name() const { return n_->var_name; }

    // Nameless structural key; equal keys iff alpha-equivalent processes.
    const std::string& key() const { return n_->key; }
    std::size_t hash() const { return n_->hash; }

    friend bool operator==(const process& a, const process& b) {
        return a.n_ == b.n_ || (a.n_->hash == b.n_->hash && a.n_->key == b.n_->key);
    }
    friend bool operator<(const process& a, const process& b) { return a.key() < b.key(); }

private:
    struct node {
        kind k = kind::sum;
        std::vector<summand> summands;
        std::vector<process> children;
        bool var_bound = false;
        std::size_t var_index = 0;
        std::string var_name;
        std::string key;
        std::size_t hash = 0;
    };

    explicit process(std::shared_ptr<const node> n) : n_(std::move(n)) {}

    static process make(node n) {
        switch (n.k) {
        case kind::sum:
            n.key = "S[";
            for (std::size_t i = 0; i < n.summands.size(); ++i) {
                if (i) n.key += ';';
                n.key += n.summands[i].act.key() + "." + n.summands[i].cont->key();
            }
            n.key += "]";
            break;
        case kind::par: n.key = "P(" + n.children[0].key() + "," + n.children[1].key() + ")"; break;
        case kind::restrict: n.key = "N(" + n.children[0].key() + ")"; break;
        case kind::var: n.key = n.var_bound ? "V#" + std::to_string(n.var_index) : "V" + n.var_name; break;
        case kind::rec: n.key = "R(" + n.children[0].key() + ")"; break;
        }
        n.hash = std::hash<std::string>{}(n.key);
        return process(std::make_shared<const node>(std::move(n)));
    }

    std::shared_ptr<const node> n_;
};

inline channel shift_channel(const channel& c, std::size_t cutoff, std::size_t by) {
    if (c.bound && c.index >= cutoff) return channel::at(c.index + by);
    return c;
}

// Adds chan_by to every bound channel index >= chan_cutoff and var_by to
// every bound variable index >= var_cutoff.
inline process shift(const process& p, std::size_t chan_by, std::size_t var_by,
                     std::size_t chan_cutoff = 0, std::size_t var_cutoff = 0) {
    if (chan_by == 0 && var_by == 0) return p;
    switch (p.k()) {
    case process::kind::sum: {
        std::vector<std::pair<action, process>> items;
        for (const auto& s : p.summands()) {
            action a = s.act;
            a.chan = shift_channel(a.chan, chan_cutoff, chan_by);
            items.emplace_back(std::move(a), shift(*s.cont, chan_by, var_by, chan_cutoff, var_cutoff));
        }
        return process::sum(std::move(items));
    }
    case process::kind::par:
        return process::par(shift(p.left(), chan_by, var_by, chan_cutoff, var_cutoff),
                            shift(p.right(), chan_by, var_by, chan_cutoff, var_cutoff));
    case process::kind::restrict:
        return process::restrict(shift(p.body(), chan_by, var_by, chan_cutoff + 1, var_cutoff));
    case process::kind::var:
        if (p.var_bound() && p.var_index() >= var_cutoff) return process::bound_var(p.var_index() + var_by);
        return p;
    case process::kind::rec:
        return process::rec(shift(p.body(), chan_by, var_by, chan_cutoff, var_cutoff + 1));
    }
    return p;
}

namespace detail {

// Replaces bound variable `target` (seen from the top of p) by q and
// removes that binder level.
inline process subst_bound(const process& p, std::size_t target, const process& q,
                           std::size_t chan_depth, std::size_t var_depth) {
    switch (p.k()) {
    case process::kind::sum: {
        std::vector<std::pair<action, process>> items;
        for (const auto& s : p.summands())
            items.emplace_back(s.act, subst_bound(*s.cont, target, q, chan_depth, var_depth));
        return process::sum(std::move(items));
    }
    case process::kind::par:
        return process::par(subst_bound(p.left(), target, q, chan_depth, var_depth),
                            subst_bound(p.right(), target, q, chan_depth, var_depth));
    case process::kind::restrict:
        return process::restrict(subst_bound(p.body(), target, q, chan_depth + 1, var_depth));
    case process::kind::var: {
        if (!p.var_bound()) return p;
        std::size_t idx = p.var_index();
        if (idx == target + var_depth) return shift(q, chan_depth, var_depth);
        if (idx > target + var_depth) return process::bound_var(idx - 1);
        return p;
    }
    case process::kind::rec:
        return process::rec(subst_bound(p.body(), target, q, chan_depth, var_depth + 1));
    }
    return p;
}

inline process subst_free(const process& p, const std::string& x, const process& q,
                          std::size_t chan_depth, std::size_t var_depth) {
    switch (p.k()) {
    case process::kind::sum: {
        std::vector<std::pair<action, process>> items;
        for (const auto& s : p.summands())
            items.emplace_back(s.act, subst_free(*s.cont, x, q, chan_depth, var_depth));
        return process::sum(std::move(items));
    }
    case process::kind::par:
        return process::par(subst_free(p.left(), x, q, chan_depth, var_depth),
                            subst_free(p.right(), x, q, chan_depth, var_depth));
    case process::kind::restrict:
        return process::restrict(subst_free(p.body(), x, q, chan_depth + 1, var_depth));
    case process::kind::var:
        if (!p.var_bound() && p.var_name() == x) return shift(q, chan_depth, var_depth);
        return p;
    case process::kind::rec:
        return process::rec(subst_free(p.body(), x, q, chan_depth, var_depth + 1));
    }
    return p;
}

}  // namespace detail

// P{Q/X} for a free variable X. Bound names of P never capture names of Q.
inline process substitute(const process& p, const std::string& x, const process& q) {
    return detail::subst_free(p, x, q, 0, 0);
}

// rec X. P  ->  P{rec X. P / X}
inline process unfold(const process& rec) {
    return detail::subst_bound(rec.body(), 0, rec, 0, 0);
}

inline void free_channels(const process& p, std::set<std::string>& out) {
    switch (p.k()) {
    case process::kind::sum:
        for (const auto& s : p.summands()) {
            if (!s.act.chan.bound && s.act.k != action::kind::tau) out.insert(s.act.chan.name);
            free_channels(*s.cont, out);
        }
        break;
    case process::kind::par:
        free_channels(p.left(), out);
        free_channels(p.right(), out);
        break;
    case process::kind::restrict:
    case process::kind::rec: free_channels(p.body(), out); break;
    case process::kind::var: break;
    }
}

inline void free_variables(const process& p, std::set<std::string>& out) {
    switch (p.k()) {
    case process::kind::sum:
        for (const auto& s : p.summands()) free_variables(*s.cont, out);
        break;
    case process::kind::par:
        free_variables(p.left(), out);
        free_variables(p.right(), out);
        break;
    case process::kind::restrict:
    case process::kind::rec: free_variables(p.body(), out); break;
    case process::kind::var:
        if (!p.var_bound()) out.insert(p.var_name());
        break;
    }
}

inline std::size_t depth(const process& p) {
    switch (p.k()) {
    case process::kind::sum: {
        std::size_t d = 0;
        for (const auto& s : p.summands()) d = std::max(d, depth(*s.cont));
        return p.summands().empty() ? 0 : d + 1;
    }
    case process::kind::par: return 1 + std::max(depth(p.left()), depth(p.right()));
    case process::kind::restrict:
    case process::kind::rec: return 1 + depth(p.body());
    case process::kind::var: return 0;
    }
    return 0;
}

}  // namespace revlts::ccs

template <>
struct std::hash<revlts::ccs::process> {
    std::size_t operator()(const revlts::ccs::process& p) const { return p.hash(); }
};
