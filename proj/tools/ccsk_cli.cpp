// ccsk — command-line workbench for reversible CCS with communication keys.
//
// Subcommands: parse, step, explore, rel, axioms, events, keyorder, bisim.
// Exit codes: 0 success, 1 property violation or domain failure, 2 parse
// errors (process text, proof labels, or command line).

#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ccsk/bisim.hpp"
#include "ccsk/keyorder.hpp"
#include "ccsk/label_relations.hpp"
#include "ccsk/ltsi.hpp"
#include "ccsk/semantics.hpp"
#include "ccsk/syntax.hpp"

namespace {

using nlohmann::json;

std::string join_keys(const std::vector<ccsk::Key>& ks) {
    if (ks.empty()) return "(none)";
    std::string out;
    for (auto k : ks) {
        if (!out.empty()) out += ' ';
        out += std::to_string(k);
    }
    return out;
}

std::string order_text(const std::vector<std::pair<ccsk::Key, ccsk::Key>>& hs) {
    if (hs.empty()) return "(discrete)";
    std::string out;
    for (auto& [a, b] : hs) {
        if (!out.empty()) out += ", ";
        out += std::to_string(a) + " < " + std::to_string(b);
    }
    return out;
}

// ---------------------------------------------------------------------------
// parse

int cmd_parse(const std::string& text, bool as_json) {
    auto p = ccsk::parse_process(text);
    bool std_p = ccsk::is_standard(p);
    bool wf = ccsk::well_formed(p);
    bool reach = wf && ccsk::is_reachable(p);
    if (as_json) {
        json j{{"term", ccsk::render(p)},
               {"keys", ccsk::keys(p)},
               {"standard", std_p},
               {"well_formed", wf},
               {"reachable", reach}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "term:        " << ccsk::render(p) << '\n'
                  << "keys:        " << join_keys(ccsk::keys(p)) << '\n'
                  << "standard:    " << (std_p ? "yes" : "no") << '\n'
                  << "well-formed: " << (wf ? "yes" : "no") << '\n'
                  << "reachable:   " << (reach ? "yes" : "no") << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// step

std::string dir_tag(const ccsk::Transition& t) { return t.forward ? "fw" : "bw"; }

void print_state(const ccsk::ProcPtr& cur,
                 const std::vector<ccsk::Transition>& moves) {
    std::cout << "process: " << ccsk::render(cur) << '\n';
    std::cout << "keys: " << join_keys(ccsk::keys(cur)) << '\n';
    if (!ccsk::keys(cur).empty())
        std::cout << "key order: " << order_text(ccsk::hasse_pairs(cur)) << '\n';
    if (moves.empty()) {
        std::cout << "moves: (none)\n";
    } else {
        std::cout << "moves:\n";
        for (size_t i = 0; i < moves.size(); ++i)
            std::cout << "  [" << i << "] " << dir_tag(moves[i]) << "  "
                      << to_string(moves[i].label) << "  ->  "
                      << ccsk::render(moves[i].tgt) << '\n';
    }
}

int cmd_step(const std::string& text) {
    auto origin = ccsk::parse_process(text);
    if (!ccsk::is_reachable(origin))
        throw ccsk::domain_error("process is not reachable: " +
                                 ccsk::render(origin));
    ccsk::ProcPtr cur = origin;
    std::vector<ccsk::Transition> history;

    std::cout << "interactive stepper; commands: <index>, undo, quit\n";
    for (;;) {
        auto moves = ccsk::forward_steps(cur);
        auto back = ccsk::backward_steps(cur);
        moves.insert(moves.end(), back.begin(), back.end());
        print_state(cur, moves);
        std::cout << "> " << std::flush;

        std::string line;
        if (!std::getline(std::cin, line)) {
            std::cout << '\n';
            break;
        }
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word)) continue;
        if (word == "quit" || word == "q") break;
        if (word == "undo") {
            if (history.empty()) {
                std::cout << "nothing to undo\n";
            } else {
                cur = history.back().src;
                history.pop_back();
                std::cout << "undid last move\n";
            }
            continue;
        }
        size_t idx = 0;
        try {
            idx = std::stoul(word);
        } catch (const std::exception&) {
            std::cout << "invalid selection: " << word << '\n';
            continue;
        }
        if (idx >= moves.size()) {
            std::cout << "invalid selection: " << word << '\n';
            continue;
        }
        const auto chosen = moves[idx];
        std::cout << "took " << dir_tag(chosen) << " "
                  << to_string(chosen.label) << '\n';
        if (!history.empty()) {
            std::cout << "relations to earlier moves:\n";
            for (size_t i = 0; i < history.size(); ++i) {
                const char* rel;
                switch (ccsk::classify_labels(chosen.label, history[i].label)) {
                    case ccsk::RelationKind::Dependent: rel = "dependent (⋉)"; break;
                    case ccsk::RelationKind::Independent: rel = "independent (ι)"; break;
                    default: rel = "not connected"; break;
                }
                std::cout << "  vs #" << i + 1 << " " << dir_tag(history[i])
                          << " " << to_string(history[i].label) << ": " << rel
                          << '\n';
            }
        }
        history.push_back(chosen);
        cur = chosen.tgt;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// explore

int cmd_explore(const std::string& text, bool as_json, bool as_dot,
                size_t max_nodes) {
    auto p = ccsk::parse_process(text);
    auto g = ccsk::explore(p, max_nodes);
    if (as_json) {
        std::cout << ccsk::graph_to_json(g) << '\n';
    } else if (as_dot) {
        std::cout << ccsk::graph_to_dot(g);
    } else {
        std::cout << "nodes: " << g.nodes.size() << '\n'
                  << "edges: " << g.edges.size() << '\n';
        if (g.requested_instance >= 0 && g.requested_instance != g.root)
            std::cout << "requested instance: node " << g.requested_instance
                      << '\n';
        for (size_t i = 0; i < g.nodes.size(); ++i)
            std::cout << "  [" << i << "] " << g.node_names[i] << '\n';
        for (auto& e : g.edges)
            std::cout << "  [" << e.src << "] --" << to_string(e.label)
                      << "--> [" << e.tgt << "]\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// rel

int cmd_rel(const std::string& l1, const std::string& l2) {
    auto a = ccsk::parse_proof_label(l1);
    auto b = ccsk::parse_proof_label(l2);
    switch (ccsk::classify_labels(a, b)) {
        case ccsk::RelationKind::Dependent:
            std::cout << "CONNECTED+DEPENDENT\n";
            return 0;
        case ccsk::RelationKind::Independent:
            std::cout << "CONNECTED+INDEPENDENT\n";
            return 0;
        case ccsk::RelationKind::NotConnected:
            std::cout << "NOT-CONNECTED\n";
            return 0;
        case ccsk::RelationKind::Connected:
            // Complementarity violated: connected but neither or both.
            std::cout << "CONNECTED\n";
            return 1;
    }
    return 1;
}

// ---------------------------------------------------------------------------
// axioms

int cmd_axioms(const std::string& text, bool as_json, size_t max_nodes) {
    auto g = ccsk::explore(ccsk::parse_process(text), max_nodes);
    auto results = ccsk::check_all_axioms(g);
    bool all = true;
    if (as_json) {
        json j = json::object();
        for (auto& [name, res] : results) {
            j[name] = {{"holds", res.holds}, {"detail", res.detail}};
            all = all && res.holds;
        }
        std::cout << j.dump(2) << '\n';
    } else {
        for (auto& [name, res] : results) {
            std::cout << name << std::string(5 - name.size(), ' ')
                      << (res.holds ? "pass" : "FAIL");
            if (!res.holds) std::cout << "  " << res.detail;
            std::cout << '\n';
            all = all && res.holds;
        }
    }
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// events

int cmd_events(const std::string& text, bool as_json, size_t max_nodes) {
    auto g = ccsk::explore(ccsk::parse_process(text), max_nodes);
    auto ci = ccsk::analyze_causality(g);
    const auto& es = ci.es;

    std::vector<int> fwd;
    for (int c = 0; c < es.classes; ++c)
        if (es.cls_forward[static_cast<size_t>(c)]) fwd.push_back(c);

    auto list_text = [](const std::vector<int>& v) {
        if (v.empty()) return std::string("-");
        std::string out;
        for (int x : v) {
            if (!out.empty()) out += ' ';
            out += std::to_string(x);
        }
        return out;
    };

    json rows = json::array();
    if (!as_json)
        std::cout << "forward events: " << fwd.size() << '\n'
                  << "id   key  label              causes     conflicts\n";
    for (int e : fwd) {
        std::vector<int> causes, conflicts;
        for (int o : fwd) {
            if (o == e) continue;
            if (ccsk::immediate_pred(ci, e, o)) causes.push_back(o);
            if (ccsk::conflict(ci, e, o)) conflicts.push_back(o);
        }
        if (as_json) {
            rows.push_back({{"id", e},
                            {"key", es.cls_key[static_cast<size_t>(e)]},
                            {"label", to_string(es.cls_label[static_cast<size_t>(e)])},
                            {"causes", causes},
                            {"conflicts", conflicts}});
        } else {
            std::ostringstream row;
            row.setf(std::ios::left);
            row.width(5);
            row << e;
            row.width(5);
            row << es.cls_key[static_cast<size_t>(e)];
            row.width(19);
            row << to_string(es.cls_label[static_cast<size_t>(e)]);
            row.width(11);
            row << list_text(causes);
            row << list_text(conflicts);
            std::cout << row.str() << '\n';
        }
    }
    if (as_json) std::cout << rows.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// keyorder

int cmd_keyorder(const std::string& text, bool as_json) {
    auto p = ccsk::parse_process(text);
    auto hs = ccsk::hasse_pairs(p);
    auto mx = ccsk::maximal_keys(p);
    if (as_json) {
        json j{{"keys", ccsk::keys(p)}, {"maximal", mx}};
        j["hasse"] = json::array();
        for (auto& [a, b] : hs) j["hasse"].push_back({a, b});
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "keys:    " << join_keys(ccsk::keys(p)) << '\n'
                  << "order:   "
                  << (ccsk::keys(p).empty() ? "(none)" : order_text(hs)) << '\n'
                  << "maximal: " << join_keys(mx) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// bisim

int cmd_bisim(const std::string& kind, const std::string& pt,
              const std::string& qt, bool as_json) {
    auto p = ccsk::parse_process(pt);
    auto q = ccsk::parse_process(qt);
    ccsk::BisimVerdict v;
    if (kind == "kp") {
        v = ccsk::is_standard(p) && ccsk::is_standard(q)
                ? ccsk::kp_bisimilar(p, q)
                : ccsk::kp_bisimilar_from_origin(p, q);
    } else if (kind == "dp") {
        v = ccsk::is_standard(p) && ccsk::is_standard(q)
                ? ccsk::dp_bisimilar(p, q)
                : ccsk::dp_bisimilar_from_origin(p, q);
    } else {
        v = ccsk::fr_bisimilar(p, q);
    }
    if (as_json) {
        json j{{"kind", kind},
               {"equivalent", v.equivalent},
               {"matched_states", v.witness.size()},
               {"distinguishing", v.distinguishing}};
        std::cout << j.dump(2) << '\n';
    } else if (v.equivalent) {
        std::cout << "EQUIVALENT\n";
        std::cout << "matched states: " << v.witness.size() << '\n';
    } else {
        std::cout << "NOT EQUIVALENT\n";
        for (auto& line : v.distinguishing) std::cout << "  " << line << '\n';
    }
    return v.equivalent ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"workbench for reversible CCS with communication keys"};
    app.require_subcommand(1);

    std::string proc_text, proc_text2, label1, label2, kind = "kp";
    bool as_json = false, as_dot = false;
    size_t max_nodes = 2'000'000;

    auto* parse = app.add_subcommand("parse", "parse a process and report its shape");
    parse->add_option("process", proc_text, "process term")->required();
    parse->add_flag("--json", as_json, "emit JSON");

    auto* step = app.add_subcommand("step", "interactive forward/backward stepper");
    step->add_option("process", proc_text, "starting process")->required();

    auto* explore = app.add_subcommand("explore", "build the reachable graph");
    explore->add_option("process", proc_text, "root process")->required();
    explore->add_flag("--json", as_json, "emit JSON");
    explore->add_flag("--dot", as_dot, "emit Graphviz");
    explore->add_option("--max-depth", max_nodes, "node budget");

    auto* rel = app.add_subcommand("rel", "classify two proof labels");
    rel->add_option("label1", label1, "first proof label")->required();
    rel->add_option("label2", label2, "second proof label")->required();

    auto* axioms = app.add_subcommand("axioms", "check the reversibility axioms");
    axioms->add_option("process", proc_text, "root process")->required();
    axioms->add_flag("--json", as_json, "emit JSON");
    axioms->add_option("--max-depth", max_nodes, "node budget");

    auto* events = app.add_subcommand("events", "event table with causality");
    events->add_option("process", proc_text, "root process")->required();
    events->add_flag("--json", as_json, "emit JSON");
    events->add_option("--max-depth", max_nodes, "node budget");

    auto* keyorder = app.add_subcommand("keyorder", "key order of a process");
    keyorder->add_option("process", proc_text, "process term")->required();
    keyorder->add_flag("--json", as_json, "emit JSON");

    auto* bisim = app.add_subcommand("bisim", "decide a behavioural equivalence");
    bisim->add_option("--kind", kind, "kp, dp or fr")
        ->check(CLI::IsMember({"kp", "dp", "fr"}));
    bisim->add_option("left", proc_text, "first process")->required();
    bisim->add_option("right", proc_text2, "second process")->required();
    bisim->add_flag("--json", as_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*parse) return cmd_parse(proc_text, as_json);
        if (*step) return cmd_step(proc_text);
        if (*explore) return cmd_explore(proc_text, as_json, as_dot, max_nodes);
        if (*rel) return cmd_rel(label1, label2);
        if (*axioms) return cmd_axioms(proc_text, as_json, max_nodes);
        if (*events) return cmd_events(proc_text, as_json, max_nodes);
        if (*keyorder) return cmd_keyorder(proc_text, as_json);
        if (*bisim) return cmd_bisim(kind, proc_text, proc_text2, as_json);
    } catch (const ccsk::parse_error& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const ccsk::explore_limit_error& e) {
        std::cerr << "exploration budget exceeded: " << e.what() << '\n';
        return 1;
    } catch (const ccsk::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
