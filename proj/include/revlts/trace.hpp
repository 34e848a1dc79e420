#pragma once

// Label sequences up to swapping adjacent independent labels (Mazurkiewicz
// traces), represented by their Foata normal form.
//
// An alphabet is any object with
//   bool independent(const L&, const L&) const;
//   bool less(const L&, const L&) const;      // strict total order
// A label is always treated as dependent on itself, so a reflexive
// independence relation cannot corrupt normal forms.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lts.hpp"

namespace revlts {

template <class A, class L>
concept alphabet_for = requires(const A& a, const L& u) {
    { a.independent(u, u) } -> std::convertible_to<bool>;
    { a.less(u, u) } -> std::convertible_to<bool>;
};

// Adapts an instance: independence from the instance, order by encoding.
template <lts_instance I>
struct instance_alphabet {
    const I* inst;

    explicit instance_alphabet(const I& i) : inst(&i) {}

    bool independent(const label_t<I>& u, const label_t<I>& v) const {
        return inst->independent(u, v);
    }
    bool less(const label_t<I>& u, const label_t<I>& v) const {
        return inst->encode_label(u) < inst->encode_label(v);
    }
};

namespace detail {

template <class L, class A>
bool dependent(const A& alpha, const L& u, const L& v) {
    return u == v || !alpha.independent(u, v);
}

// Foata level of every position: 1 + the highest level among earlier
// dependent labels.
template <class L, class A>
std::vector<std::size_t> foata_levels(std::span<const L> seq, const A& alpha) {
    std::vector<std::size_t> level(seq.size(), 0);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        std::size_t lv = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (level[j] > lv && dependent(alpha, seq[j], seq[i])) lv = level[j];
        level[i] = lv + 1;
    }
    return level;
}

}  // namespace detail

template <class L, class A>
    requires alphabet_for<A, L>
std::vector<L> canonicalize(std::span<const L> seq, const A& alpha) {
    auto level = detail::foata_levels(seq, alpha);
    std::vector<std::size_t> order(seq.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (level[a] != level[b]) return level[a] < level[b];
        return alpha.less(seq[a], seq[b]);
    });
    std::vector<L> out;
    out.reserve(seq.size());
    for (auto i : order) out.push_back(seq[i]);
    return out;
}

template <class L, class A>
    requires alphabet_for<A, L>
std::vector<L> canonicalize(const std::vector<L>& seq, const A& alpha) {
    return canonicalize(std::span<const L>(seq), alpha);
}

template <class L, class A>
    requires alphabet_for<A, L>
bool equivalent(const std::vector<L>& a, const std::vector<L>& b, const A& alpha) {
    if (a.size() != b.size()) return false;
    return canonicalize(a, alpha) == canonicalize(b, alpha);
}

// An equivalence class of label sequences, held in normal form together with
// the Foata level of each position.
template <class L>
class trace {
public:
    trace() = default;

    template <class A>
    static trace from(const std::vector<L>& seq, const A& alpha) {
        trace t;
        t.labels_ = canonicalize(seq, alpha);
        auto lv = detail::foata_levels(std::span<const L>(t.labels_), alpha);
        t.levels_ = std::move(lv);
        return t;
    }

    const std::vector<L>& canonical() const { return labels_; }
    const std::vector<std::size_t>& levels() const { return levels_; }
    std::size_t size() const { return labels_.size(); }
    bool empty() const { return labels_.empty(); }

    template <class A>
    trace append(const L& u, const A& alpha) const {
        std::size_t lv = 0;
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (levels_[i] > lv && detail::dependent(alpha, labels_[i], u)) lv = levels_[i];
        ++lv;
        // Blocks are contiguous and sorted within; insert at the sorted slot
        // of block lv.
        std::size_t pos = 0;
        while (pos < labels_.size() && levels_[pos] < lv) ++pos;
        while (pos < labels_.size() && levels_[pos] == lv && alpha.less(labels_[pos], u)) ++pos;
        trace out(*this);
        out.labels_.insert(out.labels_.begin() + static_cast<std::ptrdiff_t>(pos), u);
        out.levels_.insert(out.levels_.begin() + static_cast<std::ptrdiff_t>(pos), lv);
        return out;
    }

    // Labels u such that this trace is [L'.u] for some L'.
    template <class A>
    std::vector<L> maximal_labels(const A& alpha) const {
        std::vector<L> out;
        for (std::size_t p = 0; p < labels_.size(); ++p) {
            if (is_last_occurrence_maximal(p, alpha)) {
                if (std::find(out.begin(), out.end(), labels_[p]) == out.end())
                    out.push_back(labels_[p]);
            }
        }
        std::sort(out.begin(), out.end(), [&](const L& a, const L& b) { return alpha.less(a, b); });
        return out;
    }

    template <class A>
    std::optional<trace> remove_last(const L& u, const A& alpha) const {
        for (std::size_t p = labels_.size(); p-- > 0;) {
            if (!(labels_[p] == u)) continue;
            if (!is_last_occurrence_maximal(p, alpha)) return std::nullopt;
            // Every later label is independent of u, so no level depends on
            // position p.
            trace out(*this);
            out.labels_.erase(out.labels_.begin() + static_cast<std::ptrdiff_t>(p));
            out.levels_.erase(out.levels_.begin() + static_cast<std::ptrdiff_t>(p));
            return out;
        }
        return std::nullopt;
    }

    friend bool operator==(const trace& a, const trace& b) { return a.labels_ == b.labels_; }

private:
    template <class A>
    bool is_last_occurrence_maximal(std::size_t p, const A& alpha) const {
        for (std::size_t q = p + 1; q < labels_.size(); ++q)
            if (detail::dependent(alpha, labels_[p], labels_[q])) return false;
        return true;
    }

    std::vector<L> labels_;
    std::vector<std::size_t> levels_;
};

}  // namespace revlts
