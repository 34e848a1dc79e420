#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "../lts.hpp"

namespace revlts::xm {

using value = std::uint64_t;

// A total map from variables to naturals that is zero almost everywhere.
// Only non-zero entries are stored, so equal environments have equal
// representations.
class memory {
public:
    memory() = default;
    memory(std::initializer_list<std::pair<const std::string, value>> init) {
        for (const auto& [k, v] : init) set(k, v);
    }

    value get(const std::string& var) const {
        auto it = values_.find(var);
        return it == values_.end() ? 0 : it->second;
    }

    void set(const std::string& var, value v) {
        if (v == 0) values_.erase(var);
        else values_[var] = v;
    }

    memory with(const std::string& var, value v) const {
        memory out(*this);
        out.set(var, v);
        return out;
    }

    const std::map<std::string, value>& support() const { return values_; }

    std::string text() const {
        std::string out = "{";
        bool first = true;
        for (const auto& [k, v] : values_) {
            if (!first) out += ", ";
            out += k + ":" + std::to_string(v);
            first = false;
        }
        return out + "}";
    }

    friend bool operator==(const memory&, const memory&) = default;
    friend bool operator<(const memory& a, const memory& b) { return a.values_ < b.values_; }

private:
    std::map<std::string, value> values_;
};

}  // namespace revlts::xm

template <>
struct std::hash<revlts::xm::memory> {
    std::size_t operator()(const revlts::xm::memory& m) const {
        std::size_t h = 0;
        for (const auto& [k, v] : m.support())
            h = revlts::hash_combine(revlts::hash_combine(h, std::hash<std::string>{}(k)), std::hash<revlts::xm::value>{}(v));
        return h;
    }
};
