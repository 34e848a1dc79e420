#pragma once

// Refined actions: a relation on memories split into indexed pieces, each
// piece a partial function with a partial inverse.

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "../lts.hpp"
#include "expr.hpp"
#include "memory.hpp"

namespace revlts::xm {

enum class index_domain { unit, naturals, finite };

struct footprint {
    std::set<std::string> reads;
    std::set<std::string> writes;
};

struct refined_action {
    using piece = std::function<std::optional<memory>(value, const memory&)>;
    using chooser = std::function<std::vector<value>(const memory&)>;

    std::string id;
    index_domain domain = index_domain::unit;
    value domain_size = 1;  // number of indices for finite domains
    piece apply;
    piece unapply;
    // Indices whose forward piece may be defined at a memory. Enumeration
    // only tries these, so a natural-indexed action stays finitely branching.
    chooser candidates;
    std::optional<footprint> fp;

    std::vector<value> indices_at(const memory& m) const {
        if (candidates) return candidates(m);
        std::vector<value> out;
        for (value i = 0; i < domain_size; ++i) out.push_back(i);
        return out;
    }
};

struct y_in_sources : error {
    explicit y_in_sources(const std::string& y) : error("target '" + y + "' occurs among the sources"), target(y) {}
    std::string target;
};

namespace detail {

inline std::set<std::string> check_sources(const expr& f, const std::vector<std::string>& xs) {
    std::set<std::string> src(xs.begin(), xs.end());
    for (const auto& v : f.variables())
        if (!src.count(v)) throw error("expression " + f.text() + " reads '" + v + "' which is not a listed source");
    return src;
}

}  // namespace detail

// y := f(xs), refined by the value it erases.
inline refined_action make_assign(const std::string& id, const std::string& y, const expr& f,
                                  const std::vector<std::string>& xs) {
    if (f.is_predicate()) throw error("assignment to '" + y + "' needs a numeric expression");
    auto src = detail::check_sources(f, xs);
    refined_action a;
    a.id = id;
    a.domain = index_domain::naturals;
    a.domain_size = 0;
    a.apply = [y, f](value v, const memory& m) -> std::optional<memory> {
        if (m.get(y) != v) return std::nullopt;
        return m.with(y, f.eval(m));
    };
    a.unapply = [y, f](value v, const memory& m) -> std::optional<memory> {
        memory before = m.with(y, v);
        if (f.eval(before) != m.get(y)) return std::nullopt;
        return before;
    };
    a.candidates = [y](const memory& m) { return std::vector<value>{m.get(y)}; };
    a.fp = footprint{src, {y}};
    return a;
}

// y += f(xs), with y not among xs.
inline refined_action make_add_assign(const std::string& id, const std::string& y, const expr& f,
                                      const std::vector<std::string>& xs) {
    if (f.is_predicate()) throw error("assignment to '" + y + "' needs a numeric expression");
    auto src = detail::check_sources(f, xs);
    if (src.count(y)) throw y_in_sources(y);
    refined_action a;
    a.id = id;
    a.apply = [y, f](value, const memory& m) -> std::optional<memory> { return m.with(y, m.get(y) + f.eval(m)); };
    a.unapply = [y, f](value, const memory& m) -> std::optional<memory> {
        value d = f.eval(m);
        if (m.get(y) < d) return std::nullopt;
        return m.with(y, m.get(y) - d);
    };
    a.fp = footprint{src, {y}};
    return a;
}

inline refined_action make_test(const std::string& id, const std::vector<std::string>& xs, const expr& pred) {
    if (!pred.is_predicate()) throw error("test needs a predicate, got " + pred.text());
    auto src = detail::check_sources(pred, xs);
    refined_action a;
    a.id = id;
    auto guard = [pred](value, const memory& m) -> std::optional<memory> {
        if (!pred.eval(m)) return std::nullopt;
        return m;
    };
    a.apply = guard;
    a.unapply = guard;
    a.fp = footprint{src, {}};
    return a;
}

// y := f(xs) with no refinement. Not co-deterministic whenever f ignores y,
// so it has no inverse piece.
inline refined_action make_overwrite(const std::string& id, const std::string& y, const expr& f,
                                     const std::vector<std::string>& xs) {
    if (f.is_predicate()) throw error("assignment to '" + y + "' needs a numeric expression");
    auto src = detail::check_sources(f, xs);
    refined_action a;
    a.id = id;
    a.apply = [y, f](value, const memory& m) -> std::optional<memory> { return m.with(y, f.eval(m)); };
    a.unapply = [](value, const memory&) -> std::optional<memory> { return std::nullopt; };
    a.fp = footprint{src, {y}};
    return a;
}

// Splits a total function on vars-tuples over {0..size-1} into singleton
// pieces: index i names the tuple (digits of i in base `size`, first
// variable least significant) and piece i maps exactly that tuple.
inline refined_action make_singleton_split(const std::string& id, const std::vector<std::string>& vars, value size,
                                           std::function<memory(const memory&)> f) {
    value count = 1;
    for (std::size_t k = 0; k < vars.size(); ++k) count *= size;
    auto decode = [vars, size](value i, memory base) {
        for (const auto& v : vars) {
            base.set(v, i % size);
            i /= size;
        }
        return base;
    };
    auto encode = [vars, size](const memory& m) -> std::optional<value> {
        value i = 0, scale = 1;
        for (const auto& v : vars) {
            if (m.get(v) >= size) return std::nullopt;
            i += m.get(v) * scale;
            scale *= size;
        }
        return i;
    };
    refined_action a;
    a.id = id;
    a.domain = index_domain::finite;
    a.domain_size = count;
    a.apply = [encode, f](value i, const memory& m) -> std::optional<memory> {
        if (encode(m) != i) return std::nullopt;
        return f(m);
    };
    a.unapply = [decode, f](value i, const memory& m) -> std::optional<memory> {
        memory before = decode(i, m);
        if (f(before) != m) return std::nullopt;
        return before;
    };
    a.candidates = [encode](const memory& m) {
        auto i = encode(m);
        return i ? std::vector<value>{*i} : std::vector<value>{};
    };
    std::set<std::string> vs(vars.begin(), vars.end());
    a.fp = footprint{vs, vs};
    return a;
}

inline bool syntactic_independent(const refined_action& a, const refined_action& b) {
    if (!a.fp || !b.fp) return false;
    auto disjoint = [](const std::set<std::string>& s, const std::set<std::string>& t) {
        return std::none_of(s.begin(), s.end(), [&](const auto& x) { return t.count(x) > 0; });
    };
    return disjoint(a.fp->reads, b.fp->writes) && disjoint(b.fp->reads, a.fp->writes) &&
           disjoint(a.fp->writes, b.fp->writes);
}

struct commutation_witness {
    memory start;
    std::optional<memory> a_then_b;
    std::optional<memory> b_then_a;
};

struct commutation_verdict {
    std::size_t samples = 0;
    std::vector<commutation_witness> witnesses;
    bool pass() const { return witnesses.empty(); }
};

// Compares a(i);b(j) with b(j);a(i) pointwise on the samples.
inline commutation_verdict commutation_check(const refined_action& a, value i, const refined_action& b, value j,
                                             const std::vector<memory>& samples) {
    commutation_verdict out;
    for (const auto& m : samples) {
        ++out.samples;
        std::optional<memory> ab, ba;
        if (auto x = a.apply(i, m)) ab = b.apply(j, *x);
        if (auto x = b.apply(j, m)) ba = a.apply(i, *x);
        if (ab != ba) out.witnesses.push_back({m, ab, ba});
    }
    return out;
}

struct inverse_failure {
    value index;
    memory start;
    bool forward;  // apply then unapply, or unapply then apply
    std::optional<memory> middle;
    std::optional<memory> end;
};

// Checks that apply(i) and unapply(i) are mutually inverse on the samples,
// for the candidate indices at each sample plus `extra`.
inline std::vector<inverse_failure> inverse_check(const refined_action& a, const std::vector<memory>& samples,
                                                  const std::vector<value>& extra = {}) {
    std::vector<inverse_failure> out;
    for (const auto& m : samples) {
        auto idx = a.indices_at(m);
        idx.insert(idx.end(), extra.begin(), extra.end());
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        for (value i : idx) {
            if (auto m2 = a.apply(i, m)) {
                auto back = a.unapply(i, *m2);
                if (back != m) out.push_back({i, m, true, m2, back});
            }
            if (auto m2 = a.unapply(i, m)) {
                auto fwd = a.apply(i, *m2);
                if (fwd != m) out.push_back({i, m, false, m2, fwd});
            }
        }
    }
    return out;
}

struct footprint_failure {
    value index;
    memory start;
    std::string variable;
};

// Perturbs each probe variable outside the read set and checks that the
// result changes exactly at the perturbation; also checks that variables
// outside the write set are left alone.
inline std::vector<footprint_failure> footprint_check(const refined_action& a, const std::vector<memory>& samples,
                                                      const std::vector<std::string>& probes,
                                                      const std::vector<value>& perturb = {0, 1, 2, 7}) {
    std::vector<footprint_failure> out;
    if (!a.fp) return out;
    for (const auto& m : samples) {
        for (value i : a.indices_at(m)) {
            auto r = a.apply(i, m);
            if (!r) continue;
            for (const auto& x : probes) {
                if (!a.fp->writes.count(x) && r->get(x) != m.get(x)) out.push_back({i, m, x});
                if (a.fp->reads.count(x) || a.fp->writes.count(x)) continue;
                for (value w : perturb) {
                    auto r2 = a.apply(i, m.with(x, w));
                    if (r2 != r->with(x, w)) {
                        out.push_back({i, m, x});
                        break;
                    }
                }
            }
        }
    }
    return out;
}

// All memories over vars with values in {0..size-1}.
inline std::vector<memory> all_memories(const std::vector<std::string>& vars, value size) {
    std::vector<memory> out{memory{}};
    for (const auto& v : vars) {
        std::vector<memory> next;
        for (const auto& m : out)
            for (value x = 0; x < size; ++x) next.push_back(m.with(v, x));
        out = std::move(next);
    }
    return out;
}

}  // namespace revlts::xm
