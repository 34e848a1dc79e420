#pragma once

// Labelled transition systems: the contract an instance has to satisfy and
// bounded checkers for determinism, co-determinism and the co-diamond
// property over explored fragments.

#include <concepts>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace revlts {

template <class T>
concept hashable = requires(const T& value) {
    { std::hash<T>{}(value) } -> std::convertible_to<std::size_t>;
};

// An instance exposes forward enumeration of a term's moves and a symmetric
// independence relation on labels. Labels are ordered by their textual
// encoding; encode_label must be injective.
template <class I>
concept lts_instance = requires(const I& inst,
                                const typename I::term_type& m,
                                const typename I::label_type& u) {
    { inst.enumerate(m) } -> std::convertible_to<
        std::vector<std::pair<typename I::label_type, typename I::term_type>>>;
    { inst.independent(u, u) } -> std::convertible_to<bool>;
    { inst.encode_label(u) } -> std::convertible_to<std::string>;
    { inst.encode_term(m) } -> std::convertible_to<std::string>;
} && std::equality_comparable<typename I::term_type>
  && std::equality_comparable<typename I::label_type>
  && hashable<typename I::term_type>
  && hashable<typename I::label_type>;

template <class I> using term_t = typename I::term_type;
template <class I> using label_t = typename I::label_type;
template <class I> using move_t = std::pair<label_t<I>, term_t<I>>;

inline std::size_t hash_combine(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class determinism_violation : public error {
public:
    determinism_violation(std::string term, std::string label, std::vector<std::string> successors)
        : error(describe(term, label, successors)),
          term_(std::move(term)), label_(std::move(label)), successors_(std::move(successors)) {}

    const std::string& term() const { return term_; }
    const std::string& label() const { return label_; }
    const std::vector<std::string>& successors() const { return successors_; }

private:
    static std::string describe(const std::string& m, const std::string& u,
                                const std::vector<std::string>& succ) {
        std::ostringstream os;
        os << "determinism violated: " << m << " has " << succ.size()
           << " successors via " << u;
        return os.str();
    }

    std::string term_;
    std::string label_;
    std::vector<std::string> successors_;
};

// The unique u-successor of m, if any.
template <lts_instance I>
std::optional<term_t<I>> step(const I& inst, const term_t<I>& m, const label_t<I>& u) {
    std::optional<term_t<I>> found;
    std::vector<term_t<I>> extra;
    for (auto& [label, target] : inst.enumerate(m)) {
        if (!(label == u)) continue;
        if (!found) {
            found = std::move(target);
        } else if (!(*found == target)) {
            extra.push_back(std::move(target));
        }
    }
    if (!extra.empty()) {
        std::vector<std::string> succ{inst.encode_term(*found)};
        for (const auto& t : extra) succ.push_back(inst.encode_term(t));
        throw determinism_violation(inst.encode_term(m), inst.encode_label(u), std::move(succ));
    }
    return found;
}

template <lts_instance I>
struct transition {
    term_t<I> source;
    label_t<I> label;
    term_t<I> target;
};

// A breadth-first explored part of the state space. Transitions only connect
// known states; frontier holds states that were left unexpanded although
// they have moves.
template <lts_instance I>
struct fragment {
    std::vector<term_t<I>> states;
    std::vector<transition<I>> transitions;
    std::vector<term_t<I>> frontier;
    bool capped = false;

    bool complete() const { return frontier.empty(); }
};

inline constexpr std::size_t default_depth = 6;
inline constexpr std::size_t default_state_cap = 10000;

template <lts_instance I>
fragment<I> reachable(const I& inst, const std::vector<term_t<I>>& roots,
                      std::size_t depth = default_depth,
                      std::size_t state_cap = default_state_cap) {
    using term = term_t<I>;
    fragment<I> out;
    std::unordered_map<term, std::size_t> seen;
    std::unordered_set<term> in_frontier;
    std::deque<std::pair<term, std::size_t>> queue;

    auto mark_frontier = [&](const term& t) {
        if (in_frontier.insert(t).second) out.frontier.push_back(t);
    };

    for (const auto& root : roots) {
        if (seen.count(root)) continue;
        if (out.states.size() >= state_cap) {
            out.capped = true;
            mark_frontier(root);
            continue;
        }
        seen.emplace(root, 0);
        out.states.push_back(root);
        queue.emplace_back(root, 0);
    }

    while (!queue.empty()) {
        auto [m, d] = std::move(queue.front());
        queue.pop_front();
        auto moves = inst.enumerate(m);
        if (d >= depth) {
            if (!moves.empty()) mark_frontier(m);
            continue;
        }
        for (auto& [u, target] : moves) {
            if (!seen.count(target)) {
                if (out.states.size() >= state_cap) {
                    out.capped = true;
                    mark_frontier(m);
                    continue;
                }
                seen.emplace(target, d + 1);
                out.states.push_back(target);
                queue.emplace_back(target, d + 1);
            }
            out.transitions.push_back({m, u, target});
        }
    }
    return out;
}

template <lts_instance I>
fragment<I> reachable(const I& inst, const term_t<I>& root,
                      std::size_t depth = default_depth,
                      std::size_t state_cap = default_state_cap) {
    return reachable(inst, std::vector<term_t<I>>{root}, depth, state_cap);
}

template <lts_instance I>
struct theory_report {
    struct determinism_witness {
        term_t<I> source;
        label_t<I> label;
        std::vector<term_t<I>> targets;
    };
    struct codeterminism_witness {
        label_t<I> label;
        term_t<I> target;
        std::vector<term_t<I>> sources;
    };
    // first --u--> middle --v--> last with u independent of v, and no
    // first --v--> x --u--> last.
    struct codiamond_witness {
        term_t<I> first;
        label_t<I> u;
        term_t<I> middle;
        label_t<I> v;
        term_t<I> last;
    };

    std::vector<determinism_witness> determinism;
    std::vector<codeterminism_witness> codeterminism;
    std::vector<codiamond_witness> codiamond;
    std::size_t states = 0;
    std::size_t transitions = 0;
    std::size_t frontier = 0;

    bool deterministic() const { return determinism.empty(); }
    bool codeterministic() const { return codeterminism.empty(); }
    bool codiamond_holds() const { return codiamond.empty(); }
    bool ok() const { return deterministic() && codeterministic() && codiamond_holds(); }
    // Verdicts only speak for the explored fragment.
    bool inconclusive() const { return frontier != 0; }
};

namespace detail {

template <class A, class B>
struct pair_hash {
    std::size_t operator()(const std::pair<A, B>& p) const {
        return hash_combine(std::hash<A>{}(p.first), std::hash<B>{}(p.second));
    }
};

}  // namespace detail

template <lts_instance I>
theory_report<I> check_theory(const I& inst, const fragment<I>& frag) {
    using term = term_t<I>;
    using label = label_t<I>;
    using report = theory_report<I>;
    report out;
    out.states = frag.states.size();
    out.transitions = frag.transitions.size();
    out.frontier = frag.frontier.size();

    // Successor lists for co-diamond completion, filled on demand for states
    // outside the fragment.
    std::unordered_map<term, std::vector<move_t<I>>> moves;
    auto moves_of = [&](const term& m) -> const std::vector<move_t<I>>& {
        auto it = moves.find(m);
        if (it == moves.end()) it = moves.emplace(m, inst.enumerate(m)).first;
        return it->second;
    };

    std::unordered_map<std::pair<term, label>, std::vector<term>, detail::pair_hash<term, label>> by_source;
    std::unordered_map<std::pair<label, term>, std::vector<term>, detail::pair_hash<label, term>> by_target;
    std::vector<std::pair<term, label>> source_order;
    std::vector<std::pair<label, term>> target_order;

    auto add_unique = [](std::vector<term>& v, const term& t) {
        for (const auto& x : v)
            if (x == t) return;
        v.push_back(t);
    };

    for (const auto& tr : frag.transitions) {
        auto skey = std::make_pair(tr.source, tr.label);
        auto [sit, snew] = by_source.try_emplace(skey);
        if (snew) source_order.push_back(skey);
        add_unique(sit->second, tr.target);

        auto tkey = std::make_pair(tr.label, tr.target);
        auto [tit, tnew] = by_target.try_emplace(tkey);
        if (tnew) target_order.push_back(tkey);
        add_unique(tit->second, tr.source);
    }

    for (const auto& key : source_order) {
        const auto& targets = by_source.at(key);
        if (targets.size() > 1) out.determinism.push_back({key.first, key.second, targets});
    }
    for (const auto& key : target_order) {
        const auto& sources = by_target.at(key);
        if (sources.size() > 1) out.codeterminism.push_back({key.first, key.second, sources});
    }

    for (const auto& tr : frag.transitions) {
        for (const auto& [v, last] : moves_of(tr.target)) {
            if (!inst.independent(tr.label, v)) continue;
            bool closed = false;
            for (const auto& [w, alt] : moves_of(tr.source)) {
                if (!(w == v)) continue;
                for (const auto& [x, end] : moves_of(alt)) {
                    if (x == tr.label && end == last) {
                        closed = true;
                        break;
                    }
                }
                if (closed) break;
            }
            if (!closed) out.codiamond.push_back({tr.source, tr.label, tr.target, v, last});
        }
    }
    return out;
}

template <lts_instance I>
theory_report<I> check_theory(const I& inst, const std::vector<term_t<I>>& roots,
                              std::size_t depth = default_depth,
                              std::size_t state_cap = default_state_cap) {
    return check_theory(inst, reachable(inst, roots, depth, state_cap));
}

// Sampled symmetry check of the independence relation; returns offending
// pairs.
template <lts_instance I>
std::vector<std::pair<label_t<I>, label_t<I>>> asymmetric_pairs(const I& inst,
                                                                const std::vector<label_t<I>>& labels) {
    std::vector<std::pair<label_t<I>, label_t<I>>> bad;
    for (std::size_t i = 0; i < labels.size(); ++i)
        for (std::size_t j = i; j < labels.size(); ++j)
            if (inst.independent(labels[i], labels[j]) != inst.independent(labels[j], labels[i]))
                bad.emplace_back(labels[i], labels[j]);
    return bad;
}

}  // namespace revlts
