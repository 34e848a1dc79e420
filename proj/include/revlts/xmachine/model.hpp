#pragma once

// JSON model files:
//
//   {
//     "actions":  [{"id": "a", "kind": "assign", "target": "y", "sources": ["x"], "expr": "x"}, ...],
//     "machines": [{"states": [...], "initial": [...], "finals": [...],
//                   "transitions": [{"from": "q0", "action": "a", "to": "q1"}, ...]}, ...],
//     "memory":   {"x": 1, "y": 2},
//     "domain":   {"variables": ["x", "y"], "size": 3}
//   }
//
// Kinds are assign, addassign, test and overwrite. "sources" defaults to the
// variables of "expr". "domain" is optional; when present, checking starts
// from every memory over those variables with values below "size".

#include <cctype>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "system.hpp"

namespace revlts::xm {

struct model {
    std::shared_ptr<const shared_system> system;
    system_term initial;
    std::vector<std::vector<std::string>> initial_states;  // product of each machine's initial set
    std::vector<memory> domain;                             // empty unless declared

    // Every combination of initial states paired with the initial memory,
    // or with each domain memory when one is declared.
    std::vector<system_term> roots() const {
        std::vector<system_term> out;
        const auto& mems = domain.empty() ? std::vector<memory>{initial.mem} : domain;
        for (const auto& qs : initial_states)
            for (const auto& m : mems) out.push_back({qs, m});
        return out;
    }
};

namespace detail {

inline void check_identifier(const std::string& s, const std::string& what) {
    bool ok = !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_');
    for (char c : s) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ok) throw parse_error("invalid " + what + " '" + s + "'", 0);
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array()) throw parse_error(what + " must be a list", 0);
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw parse_error(what + " must contain strings", 0);
        out.push_back(x.get<std::string>());
        check_identifier(out.back(), what);
    }
    return out;
}

inline refined_action load_action(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("action must be an object", 0);
    auto id = j.at("id").get<std::string>();
    check_identifier(id, "action id");
    auto kind = j.at("kind").get<std::string>();
    auto e = parse_expr(j.at("expr").get<std::string>());
    std::vector<std::string> xs;
    if (j.contains("sources")) xs = string_list(j.at("sources"), "sources");
    else for (const auto& v : e.variables()) xs.push_back(v);
    auto target = [&] {
        if (!j.contains("target")) throw parse_error("action '" + id + "' needs a target", 0);
        auto y = j.at("target").get<std::string>();
        check_identifier(y, "target");
        return y;
    };
    if (kind == "assign") return make_assign(id, target(), e, xs);
    if (kind == "addassign") return make_add_assign(id, target(), e, xs);
    if (kind == "test") return make_test(id, xs, e);
    if (kind == "overwrite") return make_overwrite(id, target(), e, xs);
    throw parse_error("unknown action kind '" + kind + "'", 0);
}

inline machine load_machine(const nlohmann::json& j) {
    if (!j.is_object()) throw parse_error("machine must be an object", 0);
    machine m;
    m.states = string_list(j.at("states"), "states");
    m.initial = string_list(j.at("initial"), "initial");
    m.finals = j.contains("finals") ? string_list(j.at("finals"), "finals") : std::vector<std::string>{};
    if (m.initial.empty()) throw parse_error("machine without initial state", 0);
    for (const auto& t : j.at("transitions"))
        m.delta.push_back({t.at("from").get<std::string>(), t.at("action").get<std::string>(), t.at("to").get<std::string>()});
    return m;
}

}  // namespace detail

inline model load_model(const nlohmann::json& j) {
    try {
        std::vector<refined_action> actions;
        for (const auto& a : j.at("actions")) actions.push_back(detail::load_action(a));
        std::vector<machine> machines;
        for (const auto& m : j.at("machines")) machines.push_back(detail::load_machine(m));
        if (machines.empty()) throw parse_error("model without machines", 0);

        model out;
        out.system = std::make_shared<const shared_system>(std::move(actions), std::move(machines));
        if (j.contains("memory")) {
            for (const auto& [k, v] : j.at("memory").items()) {
                detail::check_identifier(k, "variable");
                out.initial.mem.set(k, v.get<value>());
            }
        }
        out.initial_states = {{}};
        for (const auto& mk : out.system->machines()) {
            out.initial.states.push_back(mk.initial.front());
            std::vector<std::vector<std::string>> next;
            for (const auto& qs : out.initial_states)
                for (const auto& q : mk.initial) {
                    next.push_back(qs);
                    next.back().push_back(q);
                }
            out.initial_states = std::move(next);
        }
        if (j.contains("domain")) {
            const auto& d = j.at("domain");
            out.domain = all_memories(detail::string_list(d.at("variables"), "variables"), d.at("size").get<value>());
        }
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("malformed model: ") + e.what(), 0);
    } catch (const parse_error&) {
        throw;
    } catch (const error& e) {
        throw parse_error(e.what(), 0);
    }
}

inline model load_model_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    return load_model(j);
}

inline model load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model_text(ss.str());
}

}  // namespace revlts::xm
