// Acceptance run: one PASS/FAIL line per criterion, each with its runtime
// budget. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <deque>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "generators.hpp"
#include "revlts/ccs/semantics.hpp"
#include "revlts/lts.hpp"
#include "revlts/reversible.hpp"
#include "revlts/trace.hpp"
#include "revlts/xmachine/action.hpp"
#include "revlts/xmachine/system.hpp"
#include "xm_systems.hpp"

using namespace revlts;

namespace {

struct result {
    bool ok = true;
    std::string detail;
    std::vector<std::string> problems;

    void fail(const std::string& why) {
        ok = false;
        if (problems.size() < 5) problems.push_back(why);
    }
};

int failures = 0;

void report(int id, const std::string& name, double budget, const std::function<result()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    result r;
    try {
        r = body();
    } catch (const std::exception& e) {
        r.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= budget) r.fail("over budget");
    if (!r.ok) ++failures;
    std::cout << (r.ok ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << r.detail << " (" << std::fixed
              << std::setprecision(2) << secs << " s, budget " << std::setprecision(0) << budget << " s)\n";
    for (const auto& p : r.problems) std::cout << "       " << p << "\n";
    std::cout.flush();
}

// Fragments shared by criteria 1 and 2.

std::vector<ccs::process> random_processes() {
    fixtures::process_generator gen(20261018);
    std::vector<ccs::process> out;
    for (int i = 0; i < 50; ++i) out.push_back(gen(4));
    return out;
}

std::vector<xm::system_term> copy_roots() {
    std::vector<xm::system_term> roots;
    for (const auto& m : xm::all_memories({"x", "y", "z"}, 3)) roots.push_back({{"q0", "q0"}, m});
    return roots;
}

constexpr std::size_t exhaustive_depth = 1000;

template <class I>
void check_fragment(const I& inst, const fragment<I>& f, const std::string& what, result& r, std::size_t& violations) {
    auto rep = check_theory(inst, f);
    std::size_t v = rep.determinism.size() + rep.codeterminism.size() + rep.codiamond.size();
    violations += v;
    if (v) r.fail(what + ": " + std::to_string(v) + " violations");
}

// Every transition of the fragment is checked from a configuration whose
// history leads there from a root.
template <class I>
std::size_t check_loops(const I& inst, const std::vector<term_t<I>>& roots, const fragment<I>& f, const std::string& what,
                        result& r) {
    reversible_system<I> rs(inst);
    std::unordered_map<term_t<I>, std::vector<const transition<I>*>> out;
    for (const auto& t : f.transitions) out[t.source].push_back(&t);
    std::unordered_map<term_t<I>, configuration<I>> reach;
    std::deque<term_t<I>> todo;
    for (const auto& m : roots)
        if (reach.emplace(m, rs.init(m)).second) todo.push_back(m);
    std::size_t checked = 0;
    while (!todo.empty()) {
        auto m = todo.front();
        todo.pop_front();
        const auto c = reach.at(m);
        for (const auto& u : rs.enabled_backward(c)) {
            ++checked;
            if (!(rs.forward(rs.backward(c, u), u) == c))
                r.fail(what + ": forward after backward " + inst.encode_label(u) + " from " + rs.encode(c));
        }
        auto it = out.find(m);
        if (it == out.end()) continue;
        for (const auto* t : it->second) {
            ++checked;
            auto c1 = rs.forward(c, t->label);
            if (!(rs.project(c1) == t->target) || !(rs.backward(c1, t->label) == c))
                r.fail(what + ": backward after forward " + inst.encode_label(t->label) + " from " + rs.encode(c));
            if (reach.emplace(t->target, c1).second) todo.push_back(t->target);
        }
    }
    return checked;
}

// Every valid signed sequence of length at most n from r.
template <class I>
std::vector<valid_sequence<I>> all_sequences(const reversible_system<I>& rs, const configuration<I>& r, std::size_t n) {
    std::vector<valid_sequence<I>> out;
    signed_sequence<label_t<I>> cur;
    std::function<void(const configuration<I>&)> go = [&](const configuration<I>& c) {
        out.push_back({cur, c});
        if (cur.size() == n) return;
        for (const auto& [u, t] : rs.enabled_forward(c)) {
            cur.push_back({u, direction::forward});
            go(rs.forward(c, u));
            cur.pop_back();
        }
        for (const auto& u : rs.enabled_backward(c)) {
            cur.push_back({u, direction::backward});
            go(rs.backward(c, u));
            cur.pop_back();
        }
    };
    go(r);
    return out;
}

const ccs::process& example_process() {
    static const auto p = ccs::parse_process("a.b.0 | ~b.c.0");
    return p;
}

template <class I>
std::size_t check_parabolic(const I& inst, const std::vector<term_t<I>>& roots, result& r, const std::string& what) {
    reversible_system<I> rs(inst);
    std::size_t count = 0;
    for (const auto& m : roots) {
        auto init = rs.init(m);
        auto seqs = all_sequences(rs, init, 5);
        count += seqs.size();
        for (const auto& s : seqs) {
            auto p = rs.normalize(init, s.steps);
            auto shaped = p.as_signed();
            bool shape = true;
            for (std::size_t i = 0; i < shaped.size(); ++i)
                shape &= (i < p.undone.size()) != shaped[i].is_forward();
            if (!shape) r.fail(what + ": not backward-then-forward for " + rs.encode(s.steps));
            if (p.undone.size() + p.redone.size() > s.steps.size())
                r.fail(what + ": normal form longer than " + rs.encode(s.steps));
            try {
                auto end = rs.apply_signed(init, shaped);
                if (!(end == s.final)) r.fail(what + ": endpoint moved for " + rs.encode(s.steps));
            } catch (const sequence_error&) {
                r.fail(what + ": normal form not executable for " + rs.encode(s.steps));
            }
        }
    }
    return count;
}

struct equivalence_counts {
    std::size_t sequences = 0, pairs = 0, equivalent = 0, classes = 0;
};

// Pairs are formed among the sequences sharing a starting configuration.
template <class I>
equivalence_counts check_consistency(const I& inst, const std::vector<term_t<I>>& roots, result& r,
                                     const std::string& what) {
    reversible_system<I> rs(inst);
    equivalence_counts n;
    for (const auto& m : roots) {
        auto seqs = all_sequences(rs, rs.init(m), 5);
        n.sequences += seqs.size();
        std::set<std::string> finals;
        for (const auto& s : seqs) finals.insert(rs.encode(s.final));
        n.classes += finals.size();

        for (std::size_t i = 0; i < seqs.size(); ++i) {
            for (std::size_t j = i + 1; j < seqs.size(); ++j) {
                const auto& a = seqs[i];
                const auto& b = seqs[j];
                ++n.pairs;
                bool cofinal = a.final == b.final;
                bool ce = rs.causally_equivalent(a, b);
                if (ce != cofinal) r.fail(what + ": causal equivalence differs from cofinality");
                if (!cofinal) {
                    if (rs.equiv_oracle(a, b, 12) != oracle_verdict::not_equivalent)
                        r.fail(what + ": oracle relates non-cofinal " + rs.encode(a.steps) + " and " + rs.encode(b.steps));
                    continue;
                }
                ++n.equivalent;
                auto v = rs.equiv_oracle(a, b, 12);
                if (v != oracle_verdict::equivalent)
                    r.fail(what + ": oracle " + (v == oracle_verdict::unknown ? "unknown" : "refutes") + " on " +
                           rs.encode(a.steps) + " and " + rs.encode(b.steps));
            }
        }
    }
    return n;
}

// Trace oracle support: letters 0..3 with a random independence matrix.

struct matrix_alphabet {
    std::vector<std::vector<bool>> ind;
    bool independent(int u, int v) const { return ind[u][v]; }
    bool less(int u, int v) const { return u < v; }
};

using word = std::vector<int>;

std::set<word> swap_closure(const word& w, const matrix_alphabet& a) {
    std::set<word> seen{w};
    std::deque<word> todo{w};
    while (!todo.empty()) {
        auto cur = todo.front();
        todo.pop_front();
        for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
            if (cur[i] == cur[i + 1] || !a.independent(cur[i], cur[i + 1])) continue;
            auto next = cur;
            std::swap(next[i], next[i + 1]);
            if (seen.insert(next).second) todo.push_back(next);
        }
    }
    return seen;
}

std::vector<word> words_up_to(int letters, std::size_t len) {
    std::vector<word> out{{}};
    for (std::size_t start = 0, n = 0; n < len; ++n) {
        std::size_t end = out.size();
        for (std::size_t i = start; i < end; ++i)
            for (int x = 0; x < letters; ++x) {
                auto w = out[i];
                w.push_back(x);
                out.push_back(std::move(w));
            }
        start = end;
    }
    return out;
}

word cat(word a, const word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

}  // namespace

int main() {
    ccs::refined_instance ccs_inst;
    xm::system_instance copy_inst(fixtures::copy_system());
    xm::system_instance imp_inst(fixtures::imperative_system());
    const std::vector<xm::system_term> imp_roots{{{"q0", "p0"}, {}}};

    auto procs = random_processes();
    std::vector<fragment<ccs::refined_instance>> ccs_frags;
    for (const auto& p : procs) ccs_frags.push_back(reachable(ccs_inst, p, 5));
    auto copy_frag = reachable(copy_inst, copy_roots(), exhaustive_depth);
    auto imp_frag = reachable(imp_inst, imp_roots, exhaustive_depth);

    report(1, "theory conformance", 30, [&] {
        result r;
        std::size_t violations = 0, states = 0;
        for (std::size_t i = 0; i < procs.size(); ++i) {
            check_fragment(ccs_inst, ccs_frags[i], ccs::pretty(procs[i]), r, violations);
            states += ccs_frags[i].states.size();
        }
        if (!copy_frag.complete()) r.fail("copy system not explored exhaustively");
        if (!imp_frag.complete()) r.fail("imperative system not explored exhaustively");
        check_fragment(copy_inst, copy_frag, "copy system", r, violations);
        check_fragment(imp_inst, imp_frag, "imperative system", r, violations);
        std::ostringstream d;
        d << violations << " violations; " << procs.size() << " CCS roots (" << states << " states), copy "
          << copy_frag.states.size() << " states, imperative " << imp_frag.states.size() << " states";
        r.detail = d.str();
        return r;
    });

    report(2, "loop lemma", 30, [&] {
        result r;
        std::size_t checked = 0;
        for (std::size_t i = 0; i < procs.size(); ++i)
            checked += check_loops(ccs_inst, {procs[i]}, ccs_frags[i], ccs::pretty(procs[i]), r);
        checked += check_loops(copy_inst, copy_roots(), copy_frag, "copy system", r);
        checked += check_loops(imp_inst, imp_roots, imp_frag, "imperative system", r);
        r.detail = std::to_string(checked) + " round trips";
        return r;
    });

    report(3, "preservation of the standard semantics", 5, [&] {
        result r;
        fixtures::process_generator gen(3);
        std::size_t states = 0;
        for (int i = 0; i < 25; ++i) {
            auto root = gen(4);
            for (const auto& p : reachable(ccs_inst, root, 4).states) {
                ++states;
                std::set<std::pair<std::string, std::string>> refined, standard;
                for (const auto& [u, q] : ccs::enumerate_refined(p)) {
                    auto a = ccs::interpret(u);
                    if (!a) {
                        r.fail("uninterpretable label " + u.text());
                        continue;
                    }
                    refined.emplace(a->key(), q.key());
                }
                for (const auto& [a, q] : ccs::enumerate_standard(p)) standard.emplace(a.key(), q.key());
                if (refined != standard) r.fail("transition sets differ at " + ccs::pretty(p));
            }
        }
        r.detail = "25 processes, " + std::to_string(states) + " reachable states compared";
        return r;
    });

    report(4, "worked example", 1, [&] {
        result r;
        reversible_system<ccs::refined_instance> rs(ccs_inst);
        auto u1 = ccs::parse_label("(pick(1){a.b.0}|*)");
        auto u2 = ccs::parse_label("(*|pick(1){~b.c.0})");
        auto us = ccs::parse_label("(pick(1){b.0}|pick(1){~b.c.0})");
        auto u3 = ccs::parse_label("(*|pick(1){c.0})");
        auto expect_term = [&](const configuration<ccs::refined_instance>& c, const char* text) {
            if (ccs::pretty(rs.project(c)) != text) r.fail(std::string("expected ") + text + ", got " + ccs::pretty(rs.project(c)));
        };
        auto expect_label = [&](const ccs::label& u, const char* text) {
            if (u.text() != text) r.fail(std::string("label prints as ") + u.text() + ", expected " + text);
        };
        expect_label(u1, "(pick(1){a.b.0}|*)");
        expect_label(u2, "(*|pick(1){~b.c.0})");
        expect_label(us, "(pick(1){b.0}|pick(1){~b.c.0})");
        expect_label(u3, "(*|pick(1){c.0})");

        auto init = rs.init(example_process());
        expect_term(init, "a.b.0 | ~b.c.0");
        auto c1 = rs.forward(init, u1);
        expect_term(c1, "b.0 | ~b.c.0");
        auto c2 = rs.forward(c1, u2);
        expect_term(c2, "b.0 | c.0");
        auto undo1 = rs.enabled_backward(c2);
        if (std::set<std::string>{undo1.front().text(), undo1.back().text()} != std::set<std::string>{u1.text(), u2.text()} ||
            undo1.size() != 2)
            r.fail("after computation 1 both labels should be undoable");
        if (!(rs.backward(rs.backward(c2, u1), u2) == init) || !(rs.backward(rs.backward(c2, u2), u1) == init))
            r.fail("computation 1 does not roll back in both orders");

        auto d2 = rs.forward(c1, us);
        expect_term(d2, "0 | c.0");
        auto d3 = rs.forward(d2, u3);
        expect_term(d3, "0 | 0");
        auto undo2 = rs.enabled_backward(d3);
        if (undo2.size() != 1 || !(undo2.front() == u3)) r.fail("after computation 2 only the last label should be undoable");
        auto back = rs.apply_signed(d3, backward_steps(std::vector<ccs::label>{u1, us, u3}));
        expect_term(back, "a.b.0 | ~b.c.0");
        if (!(back == init)) r.fail("full rollback does not reach the initial configuration");
        r.detail = "both computations, undo sets and rollback";
        return r;
    });

    report(5, "parabolic normal form", 60, [&] {
        result r;
        auto n1 = check_parabolic(ccs_inst, {example_process()}, r, "example process");
        auto n2 = check_parabolic(copy_inst, copy_roots(), r, "copy system");
        if (n1 + n2 < 2000) r.fail("only " + std::to_string(n1 + n2) + " sequences");
        r.detail = std::to_string(n1) + " + " + std::to_string(n2) + " sequences of length <= 5 (copy system from all 27 memories)";
        return r;
    });

    report(6, "causal consistency", 120, [&] {
        result r;
        auto a = check_consistency(ccs_inst, {example_process()}, r, "example process");
        auto b = check_consistency(copy_inst, copy_roots(), r, "copy system");
        std::ostringstream d;
        d << a.sequences + b.sequences << " sequences, " << a.pairs + b.pairs << " pairs, "
          << a.equivalent + b.equivalent << " equivalent pairs in " << a.classes + b.classes
          << " classes, oracle bound 12, pairs share a start";
        r.detail = d.str();
        return r;
    });

    report(7, "trace oracle", 60, [&] {
        result r;
        std::mt19937_64 rng(7);
        std::bernoulli_distribution coin(0.5);
        auto words = words_up_to(4, 7);
        std::size_t classes = 0;
        for (int rel = 0; rel < 100; ++rel) {
            matrix_alphabet a;
            a.ind.assign(4, std::vector<bool>(4, false));
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) a.ind[i][j] = a.ind[j][i] = coin(rng);

            // Canonical forms partition the words exactly as swap closures do.
            std::map<word, std::vector<const word*>> by_canon;
            for (const auto& w : words) {
                auto c = canonicalize(w, a);
                if (c.size() != w.size()) r.fail("canonical form changes length");
                by_canon[c].push_back(&w);
            }
            classes += by_canon.size();
            for (const auto& [c, members] : by_canon) {
                auto closure = swap_closure(*members.front(), a);
                if (closure.size() != members.size()) {
                    r.fail("class size differs from swap closure");
                    continue;
                }
                for (const auto* w : members)
                    if (!closure.count(*w)) r.fail("word outside the swap closure of its class");
            }

            // Cancellation, commuting prefix and the trace operations on all
            // words of length at most 6.
            std::map<word, word> prefix_of;
            for (const auto& w : words) {
                if (w.size() > 6) break;
                auto t = trace<int>::from(w, a);
                for (int u = 0; u < 4; ++u) {
                    auto wu = cat(w, {u});
                    auto key = canonicalize(wu, a);
                    key.push_back(u);
                    auto [it, fresh] = prefix_of.emplace(key, t.canonical());
                    if (!fresh && it->second != t.canonical()) r.fail("right cancellation fails");
                    if (t.append(u, a).remove_last(u, a) != t) r.fail("append then remove_last is not the identity");
                    bool free = std::all_of(w.begin(), w.end(), [&](int v) { return v != u && a.independent(u, v); });
                    if (free && !equivalent(wu, cat({u}, w), a)) r.fail("commuting prefix fails");
                }
            }

            // Concatenation closure on sampled pairs of classes.
            std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
            for (int k = 0; k < 200; ++k) {
                const auto& x = words[pick(rng)];
                const auto& y = words[pick(rng)];
                if (x.size() + y.size() > 7) continue;
                const auto& cx = by_canon.at(canonicalize(x, a));
                const auto& cy = by_canon.at(canonicalize(y, a));
                const auto& x2 = *cx[rng() % cx.size()];
                const auto& y2 = *cy[rng() % cy.size()];
                if (!equivalent(cat(x, y), cat(x2, y2), a)) r.fail("concatenation closure fails");
            }
        }
        r.detail = "100 relations, " + std::to_string(words.size()) + " words each, " + std::to_string(classes) + " classes";
        return r;
    });

    report(8, "commutation of copy actions", 1, [&] {
        result r;
        using namespace xm;
        auto cube = all_memories({"x", "y", "z"}, 3);
        auto a = make_assign("a", "y", parse_expr("x"), {"x"});
        auto b = make_assign("b", "z", parse_expr("x"), {"x"});
        std::size_t checks = 0;
        for (value i = 0; i < 3; ++i)
            for (value j = 0; j < 3; ++j) {
                auto v = commutation_check(a, i, b, j, cube);
                checks += v.samples;
                if (!v.pass()) r.fail("a(" + std::to_string(i) + ") and b(" + std::to_string(j) + ") do not commute");
            }
        auto copy_to = [](std::string dst) { return [dst](const memory& m) { return m.with(dst, m.get("x")); }; };
        auto a2 = make_singleton_split("a'", {"x", "y", "z"}, 3, copy_to("y"));
        auto b2 = make_singleton_split("b'", {"x", "y", "z"}, 3, copy_to("z"));
        auto v = commutation_check(a2, 1, b2, 4, cube);
        std::string witness = "none";
        if (v.pass()) {
            r.fail("singleton split commutes");
        } else {
            const auto& w = v.witnesses.front();
            witness = w.start.text() + " gives " + (w.a_then_b ? w.a_then_b->text() : "undefined") + " one way, " +
                      (w.b_then_a ? w.b_then_a->text() : "undefined") + " the other";
        }
        r.detail = std::to_string(checks) + " samples commute; split witness " + witness;
        return r;
    });

    std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << "\n";
    return failures ? 1 : 0;
}
