#include "ccsk/semantics.hpp"

#include <deque>
#include <unordered_set>

#include "ccsk/label_relations.hpp"
#include "json.hpp"

namespace ccsk {

namespace {

ProofLabel with_path(PathElem e, ProofLabel l) {
    std::visit([&](auto& s) { s.path.insert(s.path.begin(), e); }, l);
    return l;
}

bool blocked_by_restriction(const ProofLabel& l, const std::string& name) {
    Label a = action_of(l);
    return !a.is_tau() && a.name == name;
}

}  // namespace

Transition reverse(const Transition& t) {
    return {t.tgt, t.src, t.label, !t.forward};
}

namespace {

// Unchecked recursion behind forward_steps_with_key: freshness of k at the
// top level implies freshness in every subterm, so the guards below never
// need the global check.
std::vector<Transition> fw_rec(const ProcPtr& p, Key k) {
    std::vector<Transition> out;
    switch (p->kind) {
        case ProcKind::Nil:
            break;
        case ProcKind::Prefix:
            if (is_standard(p->a))
                out.push_back({p, keyed_prefix(p->act, k, p->a),
                               SimpleLabel{{}, p->act, k}, true});
            break;
        case ProcKind::KeyedPrefix:
            if (k == p->key) break;
            for (auto& t : fw_rec(p->a, k))
                out.push_back(
                    {p, keyed_prefix(p->act, p->key, t.tgt), t.label, true});
            break;
        case ProcKind::Restrict:
            for (auto& t : fw_rec(p->a, k))
                if (!blocked_by_restriction(t.label, p->res))
                    out.push_back(
                        {p, restrict_name(t.tgt, p->res), t.label, true});
            break;
        case ProcKind::Sum:
            if (is_standard(p->b))
                for (auto& t : fw_rec(p->a, k))
                    out.push_back(
                        {p, sum(t.tgt, p->b),
                         with_path({OpKind::Sum, Dir::L}, t.label), true});
            if (is_standard(p->a))
                for (auto& t : fw_rec(p->b, k))
                    out.push_back(
                        {p, sum(p->a, t.tgt),
                         with_path({OpKind::Sum, Dir::R}, t.label), true});
            break;
        case ProcKind::Par: {
            auto ls = fw_rec(p->a, k);
            auto rs = fw_rec(p->b, k);
            if (!has_key(p->b, k))
                for (auto& t : ls)
                    out.push_back(
                        {p, par(t.tgt, p->b),
                         with_path({OpKind::Par, Dir::L}, t.label), true});
            if (!has_key(p->a, k))
                for (auto& t : rs)
                    out.push_back(
                        {p, par(p->a, t.tgt),
                         with_path({OpKind::Par, Dir::R}, t.label), true});
            for (auto& tl : ls) {
                auto* sl = std::get_if<SimpleLabel>(&tl.label);
                if (!sl || sl->act.is_tau()) continue;
                for (auto& tr : rs) {
                    auto* sr = std::get_if<SimpleLabel>(&tr.label);
                    if (!sr || sr->act.is_tau()) continue;
                    if (sl->act.complement() == sr->act)
                        out.push_back({p, par(tl.tgt, tr.tgt),
                                       SyncLabel{{}, *sl, *sr}, true});
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<Transition> forward_steps_with_key(const ProcPtr& p, Key k) {
    if (has_key(p, k))
        throw domain_error("with_key freshness violated: key " +
                           std::to_string(k) + " already occurs in " +
                           render(p));
    return fw_rec(p, k);
}

std::vector<Transition> forward_steps(const ProcPtr& p) {
    return fw_rec(p, min_fresh_key(p));
}

std::vector<Transition> backward_steps(const ProcPtr& p) {
    std::vector<Transition> out;
    switch (p->kind) {
        case ProcKind::Nil:
        case ProcKind::Prefix:
            break;
        case ProcKind::KeyedPrefix:
            if (is_standard(p->a))
                out.push_back({p, prefix(p->act, p->a),
                               SimpleLabel{{}, p->act, p->key}, false});
            for (auto& t : backward_steps(p->a))
                if (key_of(t.label) != p->key)
                    out.push_back({p, keyed_prefix(p->act, p->key, t.tgt),
                                   t.label, false});
            break;
        case ProcKind::Restrict:
            for (auto& t : backward_steps(p->a))
                if (!blocked_by_restriction(t.label, p->res))
                    out.push_back(
                        {p, restrict_name(t.tgt, p->res), t.label, false});
            break;
        case ProcKind::Sum:
            if (is_standard(p->b))
                for (auto& t : backward_steps(p->a))
                    out.push_back(
                        {p, sum(t.tgt, p->b),
                         with_path({OpKind::Sum, Dir::L}, t.label), false});
            if (is_standard(p->a))
                for (auto& t : backward_steps(p->b))
                    out.push_back(
                        {p, sum(p->a, t.tgt),
                         with_path({OpKind::Sum, Dir::R}, t.label), false});
            break;
        case ProcKind::Par: {
            auto ls = backward_steps(p->a);
            auto rs = backward_steps(p->b);
            for (auto& t : ls)
                if (!has_key(p->b, key_of(t.label)))
                    out.push_back(
                        {p, par(t.tgt, p->b),
                         with_path({OpKind::Par, Dir::L}, t.label), false});
            for (auto& t : rs)
                if (!has_key(p->a, key_of(t.label)))
                    out.push_back(
                        {p, par(p->a, t.tgt),
                         with_path({OpKind::Par, Dir::R}, t.label), false});
            for (auto& tl : ls) {
                auto* sl = std::get_if<SimpleLabel>(&tl.label);
                if (!sl || sl->act.is_tau()) continue;
                for (auto& tr : rs) {
                    auto* sr = std::get_if<SimpleLabel>(&tr.label);
                    if (!sr || sr->act.is_tau()) continue;
                    if (sl->key == sr->key && sl->act.complement() == sr->act)
                        out.push_back({p, par(tl.tgt, tr.tgt),
                                       SyncLabel{{}, *sl, *sr}, false});
                }
            }
            break;
        }
    }
    return out;
}

PlainTransition erase(const Transition& t) {
    return {t.src, t.tgt, action_of(t.label), key_of(t.label), t.forward};
}

namespace {

std::vector<Transition> matching_steps(const ProcPtr& src, const Label& act,
                                       Key key, bool forward) {
    auto cands =
        forward ? fw_rec(src, key) : backward_steps(src);
    std::vector<Transition> hits;
    for (auto& c : cands)
        if (action_of(c.label) == act && key_of(c.label) == key)
            hits.push_back(c);
    return hits;
}

}  // namespace

Transition enrich(const PlainTransition& t) {
    auto hits = matching_steps(t.src, t.act, t.key, t.forward);
    std::erase_if(hits,
                  [&](const Transition& c) { return !equal(c.tgt, t.tgt); });
    if (hits.empty())
        throw domain_error("plain transition is not derivable from " +
                           render(t.src));
    if (hits.size() > 1)
        throw domain_error("plain transition has several proofs from " +
                           render(t.src));
    return hits.front();
}

Transition enrich(const ProcPtr& src, const Label& act, Key key,
                  bool forward) {
    auto hits = matching_steps(src, act, key, forward);
    if (hits.empty())
        throw domain_error("no transition with this action and key from " +
                           render(src));
    if (hits.size() > 1)
        throw domain_error(
            "several transitions share this action and key from " +
            render(src) + "; a target is needed to disambiguate");
    return hits.front();
}

namespace {

bool reachable_rec(const ProcPtr& p,
                   std::unordered_map<std::string, bool>& memo) {
    if (is_standard(p)) return true;
    std::string s = render(p);
    auto it = memo.find(s);
    if (it != memo.end()) return it->second;
    bool ok = false;
    // Backward steps strictly shrink the key set, so recursion terminates.
    for (auto& t : backward_steps(p))
        if (reachable_rec(t.tgt, memo)) {
            ok = true;
            break;
        }
    memo[s] = ok;
    return ok;
}

}  // namespace

bool is_reachable(const ProcPtr& p) {
    std::unordered_map<std::string, bool> memo;
    return reachable_rec(p, memo);
}

int LtsiGraph::node_id(const ProcPtr& p) const {
    auto it = node_index.find(render(p));
    return it == node_index.end() ? -1 : it->second;
}

int src_of(const LtsiGraph& g, TransRef t) {
    return t.forward ? g.edges[t.edge].src : g.edges[t.edge].tgt;
}

int tgt_of(const LtsiGraph& g, TransRef t) {
    return t.forward ? g.edges[t.edge].tgt : g.edges[t.edge].src;
}

const ProofLabel& label_of(const LtsiGraph& g, TransRef t) {
    return g.edges[t.edge].label;
}

TransRef reverse(TransRef t) { return {t.edge, !t.forward}; }

namespace {

// Target of the unique forward transition of p with exactly this label.
ProcPtr fire_exact(const ProcPtr& p, const ProofLabel& want) {
    for (auto& t : forward_steps_with_key(p, key_of(want)))
        if (t.label == want) return t.tgt;
    throw domain_error("independent coinitial labels do not commute at " +
                       render(p) + " over " + to_string(want));
}

}  // namespace

Transition materialize(const LtsiGraph& g, TransRef t) {
    return {g.nodes[src_of(g, t)], g.nodes[tgt_of(g, t)], label_of(g, t),
            t.forward};
}

std::vector<TransRef> transitions_from(const LtsiGraph& g, int n) {
    std::vector<TransRef> out;
    for (int e : g.out_edges[n]) out.push_back({e, true});
    for (int e : g.in_edges[n]) out.push_back({e, false});
    return out;
}

bool valid_path(const LtsiGraph& g, const TransPath& r, int start) {
    int at = start;
    for (auto t : r) {
        if (src_of(g, t) != at) return false;
        at = tgt_of(g, t);
    }
    return true;
}

LtsiGraph explore(const ProcPtr& root, size_t max_nodes) {
    LtsiGraph g;
    ProcPtr orig = origin(root);

    auto add_node = [&](const ProcPtr& p) -> int {
        std::string s = render(p);
        auto it = g.node_index.find(s);
        if (it != g.node_index.end()) return it->second;
        if (g.nodes.size() >= max_nodes)
            throw explore_limit_error("state space exceeds node budget of " +
                                      std::to_string(max_nodes));
        int id = static_cast<int>(g.nodes.size());
        g.nodes.push_back(p);
        g.node_names.push_back(s);
        g.node_index.emplace(std::move(s), id);
        g.out_edges.emplace_back();
        g.in_edges.emplace_back();
        return id;
    };

    add_node(orig);
    // Nodes: closure under canonical forward and all backward steps. Edges:
    // the reverse of every backward step, i.e. every derivable forward
    // transition between nodes; each one is found exactly once, at its
    // forward-target node.
    size_t swept = 0;
    auto sweep = [&] {
        for (; swept < g.nodes.size(); ++swept) {
            ProcPtr p = g.nodes[swept];
            for (auto& t : forward_steps(p)) add_node(t.tgt);
            for (auto& t : backward_steps(p)) {
                int s = add_node(t.tgt);
                int e = static_cast<int>(g.edges.size());
                g.edges.push_back({s, static_cast<int>(swept), t.label});
                g.out_edges[s].push_back(e);
                g.in_edges[swept].push_back(e);
            }
        }
    };
    sweep();
    // Close commuting squares: two coinitial forward edges with independent
    // labels always admit a joint state firing both, but smallest-fresh-key
    // allocation can skip it (the joint key pattern may not be the canonical
    // choice anywhere). Add the joint state and re-sweep until stable.
    for (bool grew = true; grew;) {
        grew = false;
        for (size_t n = 0; n < g.nodes.size(); ++n)
            for (size_t i = 0; i < g.out_edges[n].size(); ++i)
                for (size_t j = i + 1; j < g.out_edges[n].size(); ++j) {
                    const auto& a = g.edges[g.out_edges[n][i]];
                    const auto& b = g.edges[g.out_edges[n][j]];
                    if (!independent_labels(a.label, b.label)) continue;
                    ProcPtr joint =
                        fire_exact(g.nodes[static_cast<size_t>(a.tgt)],
                                   b.label);
                    if (g.node_index.count(render(joint))) continue;
                    add_node(joint);
                    sweep();
                    grew = true;
                }
    }

    if (is_standard(root)) {
        g.requested_instance = 0;
    } else {
        for (size_t i = 0; i < g.nodes.size(); ++i)
            if (match_up_to_keys(root, g.nodes[i])) {
                g.requested_instance = static_cast<int>(i);
                break;
            }
    }
    return g;
}

std::string graph_to_json(const LtsiGraph& g) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (size_t i = 0; i < g.nodes.size(); ++i)
        j["nodes"].push_back({{"id", i}, {"term", g.node_names[i]}});
    j["edges"] = nlohmann::json::array();
    for (auto& e : g.edges)
        j["edges"].push_back({{"src", e.src},
                              {"dst", e.tgt},
                              {"label", to_string(e.label)},
                              {"key", key_of(e.label)},
                              {"kind", is_sync(e.label) ? "sync" : "act"}});
    return j.dump(2);
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

std::string graph_to_dot(const LtsiGraph& g) {
    std::string out = "digraph ltsi {\n  rankdir=LR;\n";
    for (size_t i = 0; i < g.nodes.size(); ++i)
        out += "  n" + std::to_string(i) + " [label=\"" +
               dot_escape(g.node_names[i]) + "\"];\n";
    for (auto& e : g.edges)
        out += "  n" + std::to_string(e.src) + " -> n" + std::to_string(e.tgt) +
               " [label=\"" + dot_escape(to_string(e.label)) + "\"];\n";
    out += "}\n";
    return out;
}

}  // namespace ccsk
