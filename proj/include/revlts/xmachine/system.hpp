#pragma once

// n refined X-machines over one shared memory. Terms are (q1,...,qn, memory);
// a label (k, q, a, q', i) says machine k moved from q to q' performing
// piece i of action a.

#include <algorithm>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "../text.hpp"
#include "action.hpp"

namespace revlts::xm {

struct edge {
    std::string from;
    std::string action;
    std::string to;
};

struct machine {
    std::vector<std::string> states;
    std::vector<std::string> initial;
    std::vector<std::string> finals;
    std::vector<edge> delta;

    bool has_state(const std::string& q) const { return std::find(states.begin(), states.end(), q) != states.end(); }
    bool is_final(const std::string& q) const { return std::find(finals.begin(), finals.end(), q) != finals.end(); }
};

class shared_system {
public:
    shared_system(std::vector<refined_action> actions, std::vector<machine> machines)
        : actions_(std::move(actions)), machines_(std::move(machines)) {
        for (std::size_t i = 0; i < actions_.size(); ++i) {
            if (!by_id_.emplace(actions_[i].id, i).second) throw error("duplicate action '" + actions_[i].id + "'");
        }
        for (std::size_t k = 0; k < machines_.size(); ++k) {
            const auto& mk = machines_[k];
            auto where = "machine " + std::to_string(k + 1) + ": ";
            for (const auto* set : {&mk.initial, &mk.finals})
                for (const auto& q : *set)
                    if (!mk.has_state(q)) throw error(where + "unknown state '" + q + "'");
            for (const auto& e : mk.delta) {
                if (!mk.has_state(e.from)) throw error(where + "unknown state '" + e.from + "'");
                if (!mk.has_state(e.to)) throw error(where + "unknown state '" + e.to + "'");
                if (!by_id_.count(e.action)) throw error(where + "unknown action '" + e.action + "'");
            }
        }
    }

    const std::vector<refined_action>& actions() const { return actions_; }
    const std::vector<machine>& machines() const { return machines_; }

    const refined_action& action(const std::string& id) const {
        auto it = by_id_.find(id);
        if (it == by_id_.end()) throw error("unknown action '" + id + "'");
        return actions_[it->second];
    }

private:
    std::vector<refined_action> actions_;
    std::vector<machine> machines_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

struct system_term {
    std::vector<std::string> states;
    memory mem;

    std::string text() const {
        std::string out = "(";
        for (const auto& q : states) out += q + ",";
        return out + mem.text() + ")";
    }

    friend bool operator==(const system_term&, const system_term&) = default;
};

class system_label {
public:
    // k is 0-based here and 1-based in text.
    system_label(std::size_t k, std::string from, std::string action, std::string to, value index)
        : k_(k), from_(std::move(from)), action_(std::move(action)), to_(std::move(to)), index_(index) {
        text_ = "(" + std::to_string(k_ + 1) + "," + from_ + "," + action_ + "," + to_ + "," + std::to_string(index_) + ")";
    }

    std::size_t machine() const { return k_; }
    const std::string& from() const { return from_; }
    const std::string& action() const { return action_; }
    const std::string& to() const { return to_; }
    value index() const { return index_; }
    const std::string& text() const { return text_; }

    friend bool operator==(const system_label& a, const system_label& b) { return a.text_ == b.text_; }

private:
    std::size_t k_;
    std::string from_, action_, to_;
    value index_;
    std::string text_;
};

inline std::vector<std::pair<system_label, system_term>> enumerate_system(const shared_system& sys,
                                                                          const system_term& m) {
    std::vector<std::pair<system_label, system_term>> out;
    for (std::size_t k = 0; k < sys.machines().size(); ++k) {
        for (const auto& e : sys.machines()[k].delta) {
            if (e.from != m.states[k]) continue;
            const auto& a = sys.action(e.action);
            for (value i : a.indices_at(m.mem)) {
                auto next = a.apply(i, m.mem);
                if (!next) continue;
                system_term t{m.states, std::move(*next)};
                t.states[k] = e.to;
                system_label u(k, e.from, e.action, e.to, i);
                bool seen = std::any_of(out.begin(), out.end(), [&](const auto& mv) { return mv.first == u && mv.second == t; });
                if (!seen) out.emplace_back(std::move(u), std::move(t));
            }
        }
    }
    return out;
}

inline bool independent_labels(const shared_system& sys, const system_label& u, const system_label& v) {
    return u.machine() != v.machine() && syntactic_independent(sys.action(u.action()), sys.action(v.action()));
}

inline system_label parse_system_label(std::string_view text) {
    auto t = trim(text);
    if (t.size() < 2 || t.front() != '(' || t.back() != ')') throw parse_error("expected (k,q,a,q',i)", 0);
    auto parts = split_bracketed("[" + std::string(t.substr(1, t.size() - 2)) + "]");
    if (parts.size() != 5) throw parse_error("expected five components in " + std::string(t), 0);
    auto number = [&](std::string_view s) {
        s = trim(s);
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
            throw parse_error("expected a number, got '" + std::string(s) + "'", 0);
        return static_cast<value>(std::stoull(std::string(s)));
    };
    value k = number(parts[0]);
    if (k == 0) throw parse_error("machine numbers start at 1", 0);
    return system_label(static_cast<std::size_t>(k - 1), std::string(trim(parts[1])), std::string(trim(parts[2])),
                        std::string(trim(parts[3])), number(parts[4]));
}

// The LTS instance over a shared system.
class system_instance {
public:
    using term_type = system_term;
    using label_type = system_label;

    explicit system_instance(std::shared_ptr<const shared_system> sys) : sys_(std::move(sys)) {}

    const shared_system& system() const { return *sys_; }

    std::vector<std::pair<system_label, system_term>> enumerate(const system_term& m) const {
        return enumerate_system(*sys_, m);
    }
    bool independent(const system_label& u, const system_label& v) const { return independent_labels(*sys_, u, v); }
    const std::string& encode_label(const system_label& u) const { return u.text(); }
    std::string encode_term(const system_term& m) const { return m.text(); }
    system_label decode_label(std::string_view text) const { return parse_system_label(text); }

private:
    std::shared_ptr<const shared_system> sys_;
};

}  // namespace revlts::xm

template <>
struct std::hash<revlts::xm::system_term> {
    std::size_t operator()(const revlts::xm::system_term& m) const {
        std::size_t h = std::hash<revlts::xm::memory>{}(m.mem);
        for (const auto& q : m.states) h = revlts::hash_combine(h, std::hash<std::string>{}(q));
        return h;
    }
};

template <>
struct std::hash<revlts::xm::system_label> {
    std::size_t operator()(const revlts::xm::system_label& u) const { return std::hash<std::string>{}(u.text()); }
};
