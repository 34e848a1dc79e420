#pragma once

// Bracketed list encodings shared by traces, signed sequences and scripts.

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lts.hpp"

namespace revlts {

struct parse_error : error {
    parse_error(const std::string& what, std::size_t pos)
        : error(what + " at offset " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Splits "[a, b, c]" at commas that are not nested in (), {} or [].
inline std::vector<std::string> split_bracketed(std::string_view text) {
    auto body = trim(text);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw parse_error("expected a bracketed list", 0);
    body = body.substr(1, body.size() - 2);
    std::vector<std::string> items;
    if (trim(body).empty()) return items;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '(' || c == '{' || c == '[') ++depth;
        else if (c == ')' || c == '}' || c == ']') {
            if (--depth < 0) throw parse_error("unbalanced bracket", i + 1);
        } else if (c == ',' && depth == 0) {
            auto item = trim(body.substr(start, i - start));
            if (item.empty()) throw parse_error("empty list item", i + 1);
            items.emplace_back(item);
            start = i + 1;
        }
    }
    if (depth != 0) throw parse_error("unbalanced bracket", text.size());
    auto last = trim(body.substr(start));
    if (last.empty()) throw parse_error("empty list item", text.size());
    items.emplace_back(last);
    return items;
}

inline std::string join_bracketed(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i];
    }
    out += "]";
    return out;
}

}  // namespace revlts
