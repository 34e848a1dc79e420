#pragma once

// Refined and standard transition relations for CCS, and the LTS instances
// built on them.

#include <algorithm>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "label.hpp"
#include "parser.hpp"
#include "print.hpp"
#include "process.hpp"

namespace revlts::ccs {

// All refined transitions of p:
//   sum      sum_j a_j.P_j  --pick(i){...}-->  P_i
//   par      P|Q --(u|*)--> P'|Q,  P|Q --(*|v)--> P|Q',
//            P|Q --(u|v)--> P'|Q'  when [u] and [v] are complementary
//   restrict nu a.P --nu a.(u)--> nu a.P'  when [u] is not a or ~a
//   rec      rec X.P --rec X.P--> P{rec X.P/X}
inline std::vector<std::pair<label, process>> enumerate_refined(const process& p) {
    std::vector<std::pair<label, process>> out;
    switch (p.k()) {
    case process::kind::sum:
        for (std::size_t i = 0; i < p.summands().size(); ++i)
            out.emplace_back(label::choice(p.summands(), i + 1), *p.summands()[i].cont);
        break;
    case process::kind::par: {
        auto lhs = enumerate_refined(p.left());
        auto rhs = enumerate_refined(p.right());
        for (const auto& [u, l2] : lhs) out.emplace_back(label::left(u), process::par(l2, p.right()));
        for (const auto& [v, r2] : rhs) out.emplace_back(label::right(v), process::par(p.left(), r2));
        for (const auto& [u, l2] : lhs) {
            auto a = interpret(u);
            if (!a) continue;
            for (const auto& [v, r2] : rhs) {
                auto b = interpret(v);
                if (b && a->complements(*b)) out.emplace_back(label::sync(u, v), process::par(l2, r2));
            }
        }
        break;
    }
    case process::kind::restrict:
        for (const auto& [u, body] : enumerate_refined(p.body())) {
            auto a = interpret(u);
            if (!a) continue;
            if (a->k != action::kind::tau && a->chan == channel::at(0)) continue;
            out.emplace_back(label::restrict(u), process::restrict(body));
        }
        break;
    case process::kind::var: break;
    case process::kind::rec: out.emplace_back(label::unfold(p), unfold(p)); break;
    }
    return out;
}

// Standard CCS transitions (actions a, ~a, tau; recursion unfolds with a
// tau step). Written independently of the refined rules.
inline std::vector<std::pair<action, process>> enumerate_standard(const process& p) {
    std::vector<std::pair<action, process>> out;
    switch (p.k()) {
    case process::kind::sum:
        for (const auto& s : p.summands()) out.emplace_back(s.act, *s.cont);
        break;
    case process::kind::par: {
        auto lhs = enumerate_standard(p.left());
        auto rhs = enumerate_standard(p.right());
        for (const auto& [a, l2] : lhs) out.emplace_back(a, process::par(l2, p.right()));
        for (const auto& [b, r2] : rhs) out.emplace_back(b, process::par(p.left(), r2));
        for (const auto& [a, l2] : lhs)
            for (const auto& [b, r2] : rhs)
                if (a.k != action::kind::tau && b.k != action::kind::tau && a.k != b.k && a.chan == b.chan)
                    out.emplace_back(action::tau(), process::par(l2, r2));
        break;
    }
    case process::kind::restrict:
        for (auto [a, body] : enumerate_standard(p.body())) {
            if (a.k != action::kind::tau && a.chan.bound) {
                if (a.chan.index == 0) continue;
                a.chan = channel::at(a.chan.index - 1);
            }
            out.emplace_back(a, process::restrict(body));
        }
        break;
    case process::kind::var: break;
    case process::kind::rec:
        out.emplace_back(action::tau(), detail::subst_bound(p.body(), 0, p, 0, 0));
        break;
    }
    return out;
}

inline std::string action_text(const action& a) {
    naming env;
    return action_text(a, env);
}

// The refined CCS instance.
struct refined_instance {
    using term_type = process;
    using label_type = label;

    std::vector<std::pair<label, process>> enumerate(const process& p) const { return enumerate_refined(p); }
    bool independent(const label& u, const label& v) const { return ccs::independent(u, v); }
    const std::string& encode_label(const label& u) const { return u.text(); }
    std::string encode_term(const process& p) const { return pretty(p); }
    label decode_label(std::string_view text) const { return parse_label(text); }
    process decode_term(std::string_view text) const { return parse_process(text); }
};

// Standard CCS with plain actions as labels and no independence. Not
// co-deterministic in general; used as a contrast and an oracle.
struct standard_instance {
    using term_type = process;
    using label_type = action;

    std::vector<std::pair<action, process>> enumerate(const process& p) const { return enumerate_standard(p); }
    bool independent(const action&, const action&) const { return false; }
    std::string encode_label(const action& a) const { return ccs::action_text(a); }
    std::string encode_term(const process& p) const { return pretty(p); }
};

}  // namespace revlts::ccs

template <>
struct std::hash<revlts::ccs::action> {
    std::size_t operator()(const revlts::ccs::action& a) const { return std::hash<std::string>{}(a.key()); }
};
