// revlts: command-line front end.
//
//   revlts check     MODEL [--depth N] [--cap N] [--json]
//   revlts run       MODEL SCRIPT
//   revlts normalize MODEL SCRIPT
//   revlts equiv     MODEL SCRIPT SCRIPT
//   revlts explore   MODEL
//
// MODEL is a .ccs process or a .xm.json X-machine system (--kind overrides
// the extension). A script is either a bracketed signed sequence
// "[u, v^-1, ...]" or one "fwd <label>" / "back <label>" per line.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "revlts/ccs/semantics.hpp"
#include "revlts/lts.hpp"
#include "revlts/reversible.hpp"
#include "revlts/xmachine/model.hpp"

using json = nlohmann::json;
using namespace revlts;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;
constexpr int exit_inconclusive = 3;

struct options {
    std::size_t depth = default_depth;
    std::size_t cap = default_state_cap;
    bool json = false;
    std::string kind;
};

struct usage_error : error {
    using error::error;
};

std::string describe(const sequence_error& e) {
    return "step " + std::to_string(e.index() + 1) + ": " +
           (e.kind() == step_failure::not_enabled ? "not enabled: " : "not undoable: ") + e.label();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Model adapters: the instance, the starting terms and the label decoder.

struct ccs_model {
    using instance_type = ccs::refined_instance;

    explicit ccs_model(const std::string& path) : initial(ccs::parse_process(read_file(path))) {}

    instance_type inst;
    ccs::process initial;

    std::vector<ccs::process> roots() const { return {initial}; }
    ccs::label decode(std::string_view text) const { return ccs::parse_label(text); }

    bool extra_checks(const fragment<instance_type>&, json&, std::ostream&) const { return true; }
};

struct xm_model {
    using instance_type = xm::system_instance;

    explicit xm_model(const std::string& path) : mdl(xm::load_model_file(path)), inst(mdl.system), initial(mdl.initial) {}

    xm::model mdl;
    instance_type inst;
    xm::system_term initial;

    std::vector<xm::system_term> roots() const { return mdl.roots(); }
    xm::system_label decode(std::string_view text) const { return xm::parse_system_label(text); }

    // Each action's pieces must be mutually inverse and respect their
    // footprints on every memory met during exploration.
    bool extra_checks(const fragment<instance_type>& frag, json& report, std::ostream& text) const {
        std::vector<xm::memory> samples;
        std::set<xm::memory> seen;
        std::set<xm::value> values{0};
        std::set<std::string> vars;
        auto add = [&](const xm::memory& m) {
            if (seen.insert(m).second) samples.push_back(m);
            for (const auto& [k, v] : m.support()) {
                values.insert(v);
                vars.insert(k);
            }
        };
        for (const auto& m : mdl.domain) add(m);
        for (const auto& s : frag.states) add(s.mem);
        for (const auto& a : mdl.system->actions())
            if (a.fp) vars.insert(a.fp->writes.begin(), a.fp->writes.end());
        std::vector<xm::value> extra(values.begin(), values.end());
        std::vector<std::string> probes(vars.begin(), vars.end());

        json failures = json::array();
        for (const auto& a : mdl.system->actions()) {
            for (const auto& f : xm::inverse_check(a, samples, extra)) {
                json j{{"action", a.id},
                       {"index", f.index},
                       {"memory", f.start.text()},
                       {"kind", f.forward ? "apply then unapply" : "unapply then apply"},
                       {"middle", f.middle ? f.middle->text() : "undefined"},
                       {"result", f.end ? f.end->text() : "undefined"}};
                text << "  functionality: action " << a.id << " piece " << f.index << " at " << f.start.text() << ": "
                     << j["kind"].get<std::string>() << " gives " << j["result"].get<std::string>() << "\n";
                failures.push_back(std::move(j));
            }
            for (const auto& f : xm::footprint_check(a, samples, probes)) {
                text << "  footprint: action " << a.id << " piece " << f.index << " at " << f.start.text()
                     << " depends on or writes " << f.variable << "\n";
                failures.push_back({{"action", a.id}, {"index", f.index}, {"memory", f.start.text()}, {"variable", f.variable}});
            }
        }
        report["functionality"] = {{"ok", failures.empty()}, {"samples", samples.size()}, {"violations", failures}};
        return failures.empty();
    }
};

// Script parsing.

template <class Model>
auto parse_script(const Model& model, const std::string& text) {
    using L = label_t<typename Model::instance_type>;
    std::string body;
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        lines.emplace_back(t);
        body += std::string(t) + " ";
    }
    auto decode = [&](std::string_view s) { return model.decode(s); };
    if (!lines.empty() && lines.front().front() == '[') return decode_signed_sequence(body, decode);
    signed_sequence<L> out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view t = lines[i];
        auto sp = t.find_first_of(" \t");
        auto word = t.substr(0, sp);
        auto rest = sp == std::string_view::npos ? std::string_view{} : trim(t.substr(sp));
        if (rest.empty()) throw parse_error("script line " + std::to_string(i + 1) + ": missing label", 0);
        if (word == "fwd") out.push_back({model.decode(rest), direction::forward});
        else if (word == "back") out.push_back({model.decode(rest), direction::backward});
        else throw parse_error("script line " + std::to_string(i + 1) + ": expected fwd or back", 0);
    }
    return out;
}

// Commands.

template <class Model>
int cmd_check(const Model& model, const options& opt) {
    using I = typename Model::instance_type;
    const auto& inst = model.inst;
    auto frag = reachable(inst, model.roots(), opt.depth, opt.cap);
    auto rep = check_theory(inst, frag);

    std::ostringstream text;
    json report;
    report["states"] = rep.states;
    report["transitions"] = rep.transitions;
    report["frontier"] = rep.frontier;
    report["capped"] = frag.capped;

    json det = json::array();
    for (const auto& w : rep.determinism) {
        json targets = json::array();
        for (const auto& t : w.targets) targets.push_back(inst.encode_term(t));
        det.push_back({{"source", inst.encode_term(w.source)}, {"label", inst.encode_label(w.label)}, {"targets", targets}});
        text << "  determinism: " << inst.encode_term(w.source) << " has " << w.targets.size() << " successors via "
             << inst.encode_label(w.label) << "\n";
    }
    json codet = json::array();
    for (const auto& w : rep.codeterminism) {
        json sources = json::array();
        for (const auto& s : w.sources) sources.push_back(inst.encode_term(s));
        codet.push_back({{"label", inst.encode_label(w.label)}, {"target", inst.encode_term(w.target)}, {"sources", sources}});
        text << "  co-determinism: " << w.sources.size() << " sources reach " << inst.encode_term(w.target) << " via "
             << inst.encode_label(w.label);
        for (const auto& s : w.sources) text << "\n    from " << inst.encode_term(s);
        text << "\n";
    }
    json dia = json::array();
    for (const auto& w : rep.codiamond) {
        dia.push_back({{"first", inst.encode_term(w.first)},
                       {"u", inst.encode_label(w.u)},
                       {"middle", inst.encode_term(w.middle)},
                       {"v", inst.encode_label(w.v)},
                       {"last", inst.encode_term(w.last)}});
        text << "  co-diamond: " << inst.encode_term(w.first) << " --" << inst.encode_label(w.u) << "--> "
             << inst.encode_term(w.middle) << " --" << inst.encode_label(w.v) << "--> " << inst.encode_term(w.last)
             << " has no swapped path\n";
    }
    report["determinism"] = {{"ok", rep.deterministic()}, {"violations", det}};
    report["codeterminism"] = {{"ok", rep.codeterministic()}, {"violations", codet}};
    report["codiamond"] = {{"ok", rep.codiamond_holds()}, {"violations", dia}};

    // Loop lemma on every explored transition, from the configuration whose
    // history is empty.
    bool loop_ok = true;
    std::size_t loops = 0;
    json loop_fail = json::array();
    if (rep.deterministic()) {
        reversible_system<I> rs(inst);
        for (const auto& t : frag.transitions) {
            ++loops;
            auto r = rs.init(t.source);
            auto r1 = rs.forward(r, t.label);
            bool ok = rs.project(r1) == t.target && rs.backward(r1, t.label) == r;
            if (!ok) {
                loop_ok = false;
                loop_fail.push_back({{"source", inst.encode_term(t.source)}, {"label", inst.encode_label(t.label)}});
                text << "  loop: " << inst.encode_term(t.source) << " via " << inst.encode_label(t.label) << "\n";
            }
        }
    }
    report["loop"] = {{"ok", loop_ok}, {"checked", loops}, {"violations", loop_fail}};

    bool extra_ok = model.extra_checks(frag, report, text);
    bool violated = !rep.ok() || !loop_ok || !extra_ok;
    int code = violated ? exit_fail : (rep.inconclusive() ? exit_inconclusive : exit_ok);
    std::string verdict = violated ? "fail" : (rep.inconclusive() ? "inconclusive" : "pass");
    report["verdict"] = verdict;

    if (opt.json) {
        std::cout << report.dump(2) << "\n";
        return code;
    }
    auto mark = [](bool ok) { return ok ? "ok" : "VIOLATED"; };
    std::cout << "explored " << rep.states << " states, " << rep.transitions << " transitions";
    if (rep.frontier) std::cout << ", " << rep.frontier << " unexpanded";
    std::cout << "\n";
    std::cout << "determinism      " << mark(rep.deterministic()) << "\n";
    std::cout << "co-determinism   " << mark(rep.codeterministic()) << "\n";
    std::cout << "co-diamond       " << mark(rep.codiamond_holds()) << "\n";
    std::cout << "loop lemma       " << mark(loop_ok) << " (" << loops << " transitions)\n";
    if (report.contains("functionality"))
        std::cout << "functionality    " << mark(report["functionality"]["ok"].get<bool>()) << " ("
                  << report["functionality"]["samples"].get<std::size_t>() << " memories)\n";
    std::cout << text.str();
    if (!violated && rep.inconclusive())
        std::cout << "note: the state space was cut at depth " << opt.depth << "; verdicts cover the explored part only\n";
    std::cout << "verdict: " << verdict << "\n";
    return code;
}

template <class Model>
int cmd_run(const Model& model, const std::string& script, const options& opt) {
    using I = typename Model::instance_type;
    reversible_system<I> rs(model.inst);
    auto seq = parse_script(model, script);
    auto r = rs.init(model.initial);
    json steps = json::array();
    for (std::size_t i = 0; i < seq.size(); ++i) {
        try {
            r = rs.apply(r, seq[i]);
        } catch (const step_error& e) {
            if (opt.json) {
                std::cout << json{{"steps", steps}, {"failed_step", i + 1}, {"error", e.what()}}.dump(2) << "\n";
            } else {
                std::cerr << "step " << i + 1 << " failed: " << e.what() << "\n";
            }
            return exit_fail;
        }
        const auto& cur = rs.project(r);
        steps.push_back({{"label", model.inst.encode_label(seq[i].label)},
                         {"direction", seq[i].is_forward() ? "forward" : "backward"},
                         {"term", model.inst.encode_term(cur)}});
        if (!opt.json) std::cout << i + 1 << ". " << rs.encode(seq[i]) << "\n   -> " << model.inst.encode_term(cur) << "\n";
    }
    if (opt.json) {
        std::cout << json{{"steps", steps},
                          {"trace", rs.encode(r.history)},
                          {"initial", model.inst.encode_term(rs.initial_term(r))},
                          {"final", model.inst.encode_term(rs.project(r))}}
                         .dump(2)
                  << "\n";
        return exit_ok;
    }
    std::cout << "trace:   " << rs.encode(r.history) << "\n";
    std::cout << "initial: " << model.inst.encode_term(rs.initial_term(r)) << "\n";
    std::cout << "final:   " << model.inst.encode_term(rs.project(r)) << "\n";
    return exit_ok;
}

template <class Model>
int cmd_normalize(const Model& model, const std::string& script, const options& opt) {
    using I = typename Model::instance_type;
    reversible_system<I> rs(model.inst);
    auto seq = parse_script(model, script);
    auto r = rs.init(model.initial);
    parabolic<label_t<I>> p;
    try {
        p = rs.normalize(r, seq);
    } catch (const sequence_error& e) {
        std::cerr << "invalid script: " << describe(e) << "\n";
        return exit_fail;
    }
    auto shaped = p.as_signed();
    auto undo = backward_steps(p.undone);
    auto end = rs.apply_signed(r, shaped);
    if (opt.json) {
        std::vector<std::string> back, fwd;
        for (const auto& g : undo) back.push_back(model.inst.encode_label(g.label));
        for (const auto& u : p.redone) fwd.push_back(model.inst.encode_label(u));
        std::cout << json{{"backward", back}, {"forward", fwd}, {"steps", rs.encode(shaped)},
                          {"final", model.inst.encode_term(rs.project(end))}}
                         .dump(2)
                  << "\n";
        return exit_ok;
    }
    std::cout << "(" << rs.encode(undo) << ", " << rs.encode(p.redone) << ")\n";
    return exit_ok;
}

template <class Model>
int cmd_equiv(const Model& model, const std::string& s1, const std::string& s2, const options& opt) {
    using I = typename Model::instance_type;
    reversible_system<I> rs(model.inst);
    auto r = rs.init(model.initial);
    auto a = parse_script(model, s1);
    auto b = parse_script(model, s2);
    std::optional<valid_sequence<I>> va, vb;
    try {
        va = rs.make_valid(r, a);
    } catch (const sequence_error& e) {
        std::cerr << "first script invalid: " << describe(e) << "\n";
        return exit_usage;
    }
    try {
        vb = rs.make_valid(r, b);
    } catch (const sequence_error& e) {
        std::cerr << "second script invalid: " << describe(e) << "\n";
        return exit_usage;
    }
    bool eq = rs.causally_equivalent(*va, *vb);
    if (opt.json) {
        std::cout << json{{"equivalent", eq},
                          {"final1", rs.encode(va->final)},
                          {"final2", rs.encode(vb->final)}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
        if (!eq) {
            std::cout << "  first ends in  " << rs.encode(va->final) << "\n";
            std::cout << "  second ends in " << rs.encode(vb->final) << "\n";
        }
    }
    return eq ? exit_ok : exit_fail;
}

template <class Model>
int cmd_explore(const Model& model, std::istream& in, std::ostream& out) {
    using I = typename Model::instance_type;
    reversible_system<I> rs(model.inst);
    auto r = rs.init(model.initial);
    signed_sequence<label_t<I>> taken;
    const auto& inst = model.inst;

    auto show = [&] {
        out << "term:  " << inst.encode_term(rs.project(r)) << "\n";
        out << "trace: " << rs.encode(r.history) << "\n";
        auto fw = rs.enabled_forward(r);
        out << "forward:\n";
        for (std::size_t i = 0; i < fw.size(); ++i)
            out << "  " << i + 1 << ") " << inst.encode_label(fw[i].first) << " -> " << inst.encode_term(fw[i].second) << "\n";
        auto bw = rs.enabled_backward(r);
        out << "undoable:\n";
        for (std::size_t i = 0; i < bw.size(); ++i) out << "  " << i + 1 << ") " << inst.encode_label(bw[i]) << "\n";
    };
    auto pick = [](const std::string& arg, std::size_t n) -> std::optional<std::size_t> {
        try {
            std::size_t pos = 0;
            auto k = std::stoul(arg, &pos);
            if (pos != arg.size() || k == 0 || k > n) return std::nullopt;
            return k - 1;
        } catch (const std::exception&) {
            return std::nullopt;
        }
    };

    show();
    for (;;) {
        out << "> " << std::flush;
        std::string line;
        if (!std::getline(in, line)) break;
        std::istringstream words(line);
        std::string cmd, arg;
        words >> cmd >> arg;
        if (cmd.empty()) continue;
        if (cmd == "quit" || cmd == "q") break;
        if (cmd == "f" || cmd == "b") {
            if (cmd == "f") {
                auto fw = rs.enabled_forward(r);
                auto k = pick(arg, fw.size());
                if (!k) {
                    out << "no forward move " << arg << "\n";
                    continue;
                }
                taken.push_back({fw[*k].first, direction::forward});
                r = rs.forward(r, fw[*k].first);
            } else {
                auto bw = rs.enabled_backward(r);
                auto k = pick(arg, bw.size());
                if (!k) {
                    out << "no undoable label " << arg << "\n";
                    continue;
                }
                taken.push_back({bw[*k], direction::backward});
                r = rs.backward(r, bw[*k]);
            }
            show();
        } else if (cmd == "hist") {
            out << rs.encode(taken) << "\n";
        } else if (cmd == "norm") {
            auto p = rs.normalize(rs.init(model.initial), taken);
            out << "(" << rs.encode(backward_steps(p.undone)) << ", " << rs.encode(p.redone) << ")\n";
        } else if (cmd == "init") {
            r = rs.init(model.initial);
            taken.clear();
            show();
        } else {
            out << "commands: f <n>, b <n>, hist, norm, init, quit\n";
        }
    }
    return exit_ok;
}

template <class F>
int with_model(const std::string& path, const options& opt, F&& body) {
    std::string kind = opt.kind;
    if (kind.empty()) {
        if (ends_with(path, ".ccs")) kind = "ccs";
        else if (ends_with(path, ".xm.json")) kind = "xmachine";
        else throw usage_error("cannot tell the model kind of " + path + "; use --kind ccs|xmachine");
    }
    if (kind == "ccs") return body(ccs_model(path));
    if (kind == "xmachine") return body(xm_model(path));
    throw usage_error("unknown kind '" + kind + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal-consistent reversible semantics for labelled transition systems"};
    app.require_subcommand(1);
    app.fallthrough();
    options opt;
    app.add_option("--depth", opt.depth, "exploration depth")->capture_default_str();
    app.add_option("--cap", opt.cap, "state cap")->capture_default_str();
    app.add_flag("--json", opt.json, "machine-readable output");
    app.add_option("--kind", opt.kind, "model kind")->check(CLI::IsMember({"ccs", "xmachine"}));

    std::string model, script, script2;
    auto* check = app.add_subcommand("check", "verify the theory on the explored state space");
    check->add_option("model", model)->required();
    auto* run = app.add_subcommand("run", "execute a script from the initial configuration");
    run->add_option("model", model)->required();
    run->add_option("script", script)->required();
    auto* norm = app.add_subcommand("normalize", "rewrite a script into undo-then-redo shape");
    norm->add_option("model", model)->required();
    norm->add_option("script", script)->required();
    auto* equiv = app.add_subcommand("equiv", "decide causal equivalence of two scripts");
    equiv->add_option("model", model)->required();
    equiv->add_option("first", script)->required();
    equiv->add_option("second", script2)->required();
    auto* explore = app.add_subcommand("explore", "step forwards and backwards interactively");
    explore->add_option("model", model)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }

    try {
        if (check->parsed()) return with_model(model, opt, [&](const auto& m) { return cmd_check(m, opt); });
        if (run->parsed()) {
            auto text = read_file(script);
            return with_model(model, opt, [&](const auto& m) { return cmd_run(m, text, opt); });
        }
        if (norm->parsed()) {
            auto text = read_file(script);
            return with_model(model, opt, [&](const auto& m) { return cmd_normalize(m, text, opt); });
        }
        if (equiv->parsed()) {
            auto t1 = read_file(script), t2 = read_file(script2);
            return with_model(model, opt, [&](const auto& m) { return cmd_equiv(m, t1, t2, opt); });
        }
        if (explore->parsed())
            return with_model(model, opt, [&](const auto& m) { return cmd_explore(m, std::cin, std::cout); });
    } catch (const parse_error& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return exit_usage;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
