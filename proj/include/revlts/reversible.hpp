#pragma once

// The causal-consistent reversible extension of an instance.
//
// A configuration pairs a trace (the history, up to swaps of independent
// labels) with the current term. Forward steps append to the history;
// a backward step u^-1 is allowed whenever u is a maximal label of the
// history, and the predecessor term is recovered by replaying the shortened
// history from the initial term.

#include <cassert>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lts.hpp"
#include "text.hpp"
#include "trace.hpp"

namespace revlts {

enum class direction { forward, backward };

template <class L>
struct signed_label {
    L label;
    direction dir = direction::forward;

    bool is_forward() const { return dir == direction::forward; }
    signed_label inverse() const {
        return {label, dir == direction::forward ? direction::backward : direction::forward};
    }
    friend bool operator==(const signed_label&, const signed_label&) = default;
};

template <class L> using signed_sequence = std::vector<signed_label<L>>;

template <class L>
signed_sequence<L> inverse(const signed_sequence<L>& seq) {
    signed_sequence<L> out;
    out.reserve(seq.size());
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) out.push_back(it->inverse());
    return out;
}

template <class L>
signed_sequence<L> forward_steps(const std::vector<L>& labels) {
    signed_sequence<L> out;
    for (const auto& u : labels) out.push_back({u, direction::forward});
    return out;
}

// L^-1: the labels of L undone from last to first.
template <class L>
signed_sequence<L> backward_steps(const std::vector<L>& labels) {
    return inverse(forward_steps(labels));
}

enum class step_failure { not_enabled, not_undoable };

class step_error : public error {
public:
    step_error(step_failure kind, const std::string& label)
        : error(std::string(kind == step_failure::not_enabled ? "not enabled: " : "not undoable: ") + label),
          kind_(kind), label_(label) {}
    step_failure kind() const { return kind_; }
    const std::string& label() const { return label_; }

private:
    step_failure kind_;
    std::string label_;
};

// A signed sequence that cannot be executed; index is the 0-based position
// of the first failing step.
class sequence_error : public error {
public:
    sequence_error(std::size_t index, const step_error& cause)
        : error("step " + std::to_string(index) + ": " + cause.what()),
          index_(index), kind_(cause.kind()), label_(cause.label()) {}
    std::size_t index() const { return index_; }
    step_failure kind() const { return kind_; }
    const std::string& label() const { return label_; }

private:
    std::size_t index_;
    step_failure kind_;
    std::string label_;
};

template <lts_instance I>
struct configuration {
    trace<label_t<I>> history;
    term_t<I> current;
    term_t<I> initial;

    friend bool operator==(const configuration& a, const configuration& b) {
        bool same = a.history == b.history && a.current == b.current;
        assert(!same || a.initial == b.initial);
        return same;
    }
};

// Backward-then-forward shape: the steps are undone(L1)^-1 followed by
// redone(L2), i.e. the labels of `undone` are undone last-to-first.
template <class L>
struct parabolic {
    std::vector<L> undone;
    std::vector<L> redone;

    signed_sequence<L> as_signed() const {
        auto out = backward_steps(undone);
        auto fwd = forward_steps(redone);
        out.insert(out.end(), fwd.begin(), fwd.end());
        return out;
    }
};

template <lts_instance I>
struct valid_sequence {
    signed_sequence<label_t<I>> steps;
    configuration<I> final;
};

enum class oracle_verdict { equivalent, not_equivalent, unknown };

template <lts_instance I>
class reversible_system {
public:
    using term = term_t<I>;
    using label = label_t<I>;
    using config = configuration<I>;
    using signed_seq = signed_sequence<label>;

    explicit reversible_system(const I& inst) : inst_(&inst), alpha_(inst) {}

    const I& instance() const { return *inst_; }
    const instance_alphabet<I>& alphabet() const { return alpha_; }

    config init(const term& m) const { return {trace<label>{}, m, m}; }

    const term& project(const config& r) const { return r.current; }
    const term& initial_term(const config& r) const { return r.initial; }

    config forward(const config& r, const label& u) const {
        auto next = step(*inst_, r.current, u);
        if (!next) throw step_error(step_failure::not_enabled, inst_->encode_label(u));
        return {r.history.append(u, alpha_), std::move(*next), r.initial};
    }

    config backward(const config& r, const label& u) const {
        auto shorter = r.history.remove_last(u, alpha_);
        if (!shorter) throw step_error(step_failure::not_undoable, inst_->encode_label(u));
        term previous = replay(r.initial, shorter->canonical());
        assert(step(*inst_, previous, u) == std::optional<term>(r.current));
        return {std::move(*shorter), std::move(previous), r.initial};
    }

    config apply(const config& r, const signed_label<label>& g) const {
        return g.is_forward() ? forward(r, g.label) : backward(r, g.label);
    }

    std::vector<move_t<I>> enabled_forward(const config& r) const {
        auto moves = inst_->enumerate(r.current);
        std::stable_sort(moves.begin(), moves.end(), [&](const auto& a, const auto& b) {
            return alpha_.less(a.first, b.first);
        });
        return moves;
    }

    std::vector<label> enabled_backward(const config& r) const {
        return r.history.maximal_labels(alpha_);
    }

    config apply_signed(const config& r, const signed_seq& seq) const {
        config cur = r;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            try {
                cur = apply(cur, seq[i]);
            } catch (const step_error& e) {
                throw sequence_error(i, e);
            }
        }
        return cur;
    }

    // Replays labels from m; the labels must be executable.
    term replay(const term& m, const std::vector<label>& labels) const {
        if (labels.empty()) return m;
        replay_key key{m, labels};
        if (auto it = replay_memo_.find(key); it != replay_memo_.end()) return it->second;
        term cur = m;
        for (const auto& u : labels) {
            auto next = step(*inst_, cur, u);
            if (!next) throw error("history does not replay from the initial term at " + std::string(inst_->encode_label(u)));
            cur = std::move(*next);
        }
        replay_memo_.emplace(std::move(key), cur);
        return cur;
    }

    // The history replays from the initial term to the current one.
    bool well_formed(const config& r) const {
        try {
            return replay(r.initial, r.history.canonical()) == r.current;
        } catch (const error&) {
            return false;
        }
    }

    // Rewrites seq (valid from r) into backward-then-forward shape using only
    // cancellations u.u^-1, u^-1.u and swaps u.v^-1 -> v^-1.u (u != v).
    // Cancellations are applied eagerly.
    parabolic<label> normalize(const config& r, const signed_seq& seq) const {
        (void)apply_signed(r, seq);
        signed_seq cur = seq;
        for (;;) {
            bool changed = false;
            for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
                if (cur[i].label == cur[i + 1].label && cur[i].dir != cur[i + 1].dir) {
                    cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(i),
                              cur.begin() + static_cast<std::ptrdiff_t>(i + 2));
                    changed = true;
                    break;
                }
            }
            if (changed) continue;
            for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
                if (cur[i].is_forward() && !cur[i + 1].is_forward()) {
                    std::swap(cur[i], cur[i + 1]);
                    changed = true;
                    break;
                }
            }
            if (!changed) break;
        }
        parabolic<label> out;
        for (const auto& g : cur) {
            if (g.is_forward()) out.redone.push_back(g.label);
            else out.undone.insert(out.undone.begin(), g.label);
        }
        return out;
    }

    valid_sequence<I> make_valid(const config& from, const signed_seq& seq) const {
        return {seq, apply_signed(from, seq)};
    }

    // The unique configuration the sequence starts from; throws
    // sequence_error if the sequence is not valid.
    config initial_configuration(const valid_sequence<I>& s) const {
        return apply_signed(s.final, inverse(s.steps));
    }

    // Coinitial and cofinal.
    bool causally_equivalent(const valid_sequence<I>& a, const valid_sequence<I>& b) const {
        if (!(a.final == b.final)) {
            (void)initial_configuration(a);
            (void)initial_configuration(b);
            return false;
        }
        return initial_configuration(a) == initial_configuration(b);
    }

    // Bounded search for a chain of validity-preserving rewrites (swaps of
    // independent neighbours, cancellation and insertion of inverse pairs)
    // from a to b. Inserted pairs may grow sequences to at most
    // max(|a|, |b|) + 2 steps.
    oracle_verdict equiv_oracle(const valid_sequence<I>& a, const valid_sequence<I>& b,
                                std::size_t bound) const {
        if (!(a.final == b.final)) return oracle_verdict::not_equivalent;
        if (!(initial_configuration(a) == initial_configuration(b))) return oracle_verdict::not_equivalent;
        const std::size_t cap = std::max(a.steps.size(), b.steps.size()) + 2;

        struct side {
            std::unordered_set<std::string> seen;
            std::vector<signed_seq> layer;
        };
        side sa, sb;
        sa.seen.insert(key_of(a.steps));
        sa.layer.push_back(a.steps);
        sb.seen.insert(key_of(b.steps));
        sb.layer.push_back(b.steps);
        if (sa.seen.count(key_of(b.steps))) return oracle_verdict::equivalent;

        std::size_t used = 0;
        while (used < bound) {
            side& grow = sa.layer.size() <= sb.layer.size() ? sa : sb;
            side& other = &grow == &sa ? sb : sa;
            if (grow.layer.empty()) break;
            std::vector<signed_seq> next;
            for (const auto& s : grow.layer) {
                for (auto& n : rewrites(s, a.final, cap)) {
                    auto k = key_of(n);
                    if (!grow.seen.insert(k).second) continue;
                    if (other.seen.count(k)) return oracle_verdict::equivalent;
                    next.push_back(std::move(n));
                }
            }
            grow.layer = std::move(next);
            ++used;
        }
        return oracle_verdict::unknown;
    }

    // Valid one-step rewrites of seq ending in `final`.
    std::vector<signed_seq> rewrites(const signed_seq& seq, const config& final, std::size_t cap) const {
        std::vector<signed_seq> out;
        // states[i] is the configuration before step i; states[n] == final.
        std::vector<config> states(seq.size() + 1, final);
        for (std::size_t i = seq.size(); i-- > 0;) states[i] = apply(states[i + 1], seq[i].inverse());

        // A rewrite is valid when its two new steps lead from states[i] to
        // states[i + 2].
        auto reaches = [&](const config& from, const signed_label<label>& g, const signed_label<label>& h,
                           const config& to) {
            try {
                return apply(apply(from, g), h) == to;
            } catch (const step_error&) {
                return false;
            }
        };

        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            const auto& g = seq[i];
            const auto& h = seq[i + 1];
            if (g.label == h.label && g.dir != h.dir) {
                if (!(states[i] == states[i + 2])) continue;
                signed_seq cand = seq;
                cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(i),
                           cand.begin() + static_cast<std::ptrdiff_t>(i + 2));
                out.push_back(std::move(cand));
            } else if (!(g.label == h.label) && inst_->independent(g.label, h.label)) {
                if (!reaches(states[i], h, g, states[i + 2])) continue;
                signed_seq cand = seq;
                std::swap(cand[i], cand[i + 1]);
                out.push_back(std::move(cand));
            }
        }
        if (seq.size() + 2 <= cap) {
            for (std::size_t p = 0; p <= seq.size(); ++p) {
                auto insert_pair = [&](signed_label<label> first) {
                    if (!reaches(states[p], first, first.inverse(), states[p])) return;
                    signed_seq cand = seq;
                    auto at = cand.begin() + static_cast<std::ptrdiff_t>(p);
                    at = cand.insert(at, first.inverse());
                    cand.insert(at, first);
                    out.push_back(std::move(cand));
                };
                for (const auto& [u, target] : enabled_forward(states[p]))
                    insert_pair({u, direction::forward});
                for (const auto& u : enabled_backward(states[p]))
                    insert_pair({u, direction::backward});
            }
        }
        return out;
    }

    std::string encode(const signed_label<label>& g) const {
        auto s = std::string(inst_->encode_label(g.label));
        if (!g.is_forward()) s += "^-1";
        return s;
    }

    std::string encode(const signed_seq& seq) const {
        std::vector<std::string> items;
        for (const auto& g : seq) items.push_back(encode(g));
        return join_bracketed(items);
    }

    std::string encode(const std::vector<label>& labels) const {
        std::vector<std::string> items;
        for (const auto& u : labels) items.push_back(std::string(inst_->encode_label(u)));
        return join_bracketed(items);
    }

    std::string encode(const trace<label>& t) const { return encode(t.canonical()); }

    std::string encode(const config& r) const {
        return "(" + encode(r.history) + ", " + std::string(inst_->encode_term(r.current)) + ")";
    }

private:
    std::string key_of(const signed_seq& seq) const { return encode(seq); }

    struct replay_key {
        term initial;
        std::vector<label> labels;
        friend bool operator==(const replay_key&, const replay_key&) = default;
    };
    struct replay_hash {
        std::size_t operator()(const replay_key& k) const {
            std::size_t h = std::hash<term>{}(k.initial);
            for (const auto& u : k.labels) h = hash_combine(h, std::hash<label>{}(u));
            return h;
        }
    };

    const I* inst_;
    instance_alphabet<I> alpha_;
    // Replay results; confines the system object to one thread.
    mutable std::unordered_map<replay_key, term, replay_hash> replay_memo_;
};

// Parses one signed step: a label encoding optionally suffixed with "^-1".
template <class Decode>
auto decode_signed(std::string_view text, Decode&& decode_label) {
    auto body = trim(text);
    direction dir = direction::forward;
    constexpr std::string_view suffix = "^-1";
    if (body.size() >= suffix.size() && body.substr(body.size() - suffix.size()) == suffix) {
        dir = direction::backward;
        body = trim(body.substr(0, body.size() - suffix.size()));
    }
    using L = std::decay_t<decltype(decode_label(body))>;
    return signed_label<L>{decode_label(body), dir};
}

template <class Decode>
auto decode_signed_sequence(std::string_view text, Decode&& decode_label) {
    using L = std::decay_t<decltype(decode_label(std::string_view{}))>;
    signed_sequence<L> out;
    for (const auto& item : split_bracketed(text)) out.push_back(decode_signed(item, decode_label));
    return out;
}

}  // namespace revlts
