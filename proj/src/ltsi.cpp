#include "ccsk/ltsi.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace ccsk {

bool label_independent(const LtsiGraph& g, TransRef a, TransRef b) {
    return independent_labels(label_of(g, a), label_of(g, b));
}

bool label_dependent(const LtsiGraph& g, TransRef a, TransRef b) {
    return dependent_labels(label_of(g, a), label_of(g, b));
}

namespace {

IndependenceFn pick(const IndependenceFn& ind) {
    return ind ? ind : IndependenceFn(label_independent);
}

std::string describe(const LtsiGraph& g, TransRef t) {
    std::string arrow = t.forward ? " --" : " ~~";
    std::string head = t.forward ? "--> " : "~~> ";
    return g.node_names[static_cast<size_t>(src_of(g, t))] + arrow +
           to_string(label_of(g, t)) + head +
           g.node_names[static_cast<size_t>(tgt_of(g, t))];
}

// All (u', t') with u' from tgt(t) matching u in label and direction, t' from
// tgt(u) matching t, and tgt(u') == tgt(t').
std::vector<std::pair<TransRef, TransRef>> completions(const LtsiGraph& g,
                                                       TransRef t, TransRef u) {
    std::vector<std::pair<TransRef, TransRef>> out;
    for (TransRef up : transitions_from(g, tgt_of(g, t))) {
        if (up.forward != u.forward || !(label_of(g, up) == label_of(g, u)))
            continue;
        for (TransRef tp : transitions_from(g, tgt_of(g, u))) {
            if (tp.forward != t.forward || !(label_of(g, tp) == label_of(g, t)))
                continue;
            if (tgt_of(g, up) == tgt_of(g, tp)) out.emplace_back(up, tp);
        }
    }
    return out;
}

size_t di(TransRef t) {
    return static_cast<size_t>(t.edge) * 2 + (t.forward ? 0 : 1);
}

TransRef from_di(size_t i) {
    return TransRef{static_cast<int>(i / 2), i % 2 == 0};
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); }
};

}  // namespace

AxiomResult check_sp(const LtsiGraph& g, const IndependenceFn& ind0) {
    auto ind = pick(ind0);
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        auto ts = transitions_from(g, static_cast<int>(n));
        for (size_t i = 0; i < ts.size(); ++i)
            for (size_t j = i + 1; j < ts.size(); ++j) {
                if (!ind(g, ts[i], ts[j])) continue;
                if (completions(g, ts[i], ts[j]).empty())
                    return {false, "no completing square over " +
                                       describe(g, ts[i]) + "  and  " +
                                       describe(g, ts[j])};
            }
    }
    return {};
}

AxiomResult check_bti(const LtsiGraph& g, const IndependenceFn& ind0) {
    auto ind = pick(ind0);
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        std::vector<TransRef> back;
        for (TransRef t : transitions_from(g, static_cast<int>(n)))
            if (!t.forward) back.push_back(t);
        for (size_t i = 0; i < back.size(); ++i)
            for (size_t j = i + 1; j < back.size(); ++j)
                if (!ind(g, back[i], back[j]))
                    return {false, "dependent coinitial backward pair " +
                                       describe(g, back[i]) + "  and  " +
                                       describe(g, back[j])};
    }
    return {};
}

AxiomResult check_wf(const LtsiGraph& g, const IndependenceFn&) {
    for (size_t e = 0; e < g.edges.size(); ++e) {
        const auto& ed = g.edges[e];
        Key k = key_of(ed.label);
        auto ks = keys(g.nodes[static_cast<size_t>(ed.src)]);
        auto kt = keys(g.nodes[static_cast<size_t>(ed.tgt)]);
        if (kt.size() != ks.size() + 1 ||
            has_key(g.nodes[static_cast<size_t>(ed.src)], k) ||
            !has_key(g.nodes[static_cast<size_t>(ed.tgt)], k))
            return {false,
                    "forward step does not add exactly its key: " +
                        describe(g, TransRef{static_cast<int>(e), true})};
    }
    return {};
}

AxiomResult check_pci(const LtsiGraph& g, const IndependenceFn& ind0) {
    auto ind = pick(ind0);
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        auto ts = transitions_from(g, static_cast<int>(n));
        for (TransRef t : ts)
            for (TransRef u : ts) {
                if (t == u || !ind(g, t, u)) continue;
                for (auto [up, tp] : completions(g, t, u)) {
                    (void)tp;
                    if (!ind(g, up, reverse(t)))
                        return {false, "completion " + describe(g, up) +
                                           "  not independent of reversed  " +
                                           describe(g, t)};
                }
            }
    }
    return {};
}

AxiomResult check_id(const LtsiGraph& g, const IndependenceFn& ind0) {
    auto ind = pick(ind0);
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        auto ts = transitions_from(g, static_cast<int>(n));
        for (TransRef t : ts)
            for (TransRef u : ts) {
                if (t == u) continue;
                for (auto [up, tp] : completions(g, t, u)) {
                    (void)tp;
                    bool degenerate =
                        t.forward == u.forward
                            ? tgt_of(g, t) == tgt_of(g, u)
                            : src_of(g, t) == tgt_of(g, up);
                    if (!degenerate && !ind(g, t, u))
                        return {false, "non-degenerate square with dependent "
                                       "sides " +
                                           describe(g, t) + "  and  " +
                                           describe(g, u)};
                }
            }
    }
    return {};
}

namespace {
EventSystem build_events(const LtsiGraph& g, const IndependenceFn& ind,
                         bool enforce_labels);
}

AxiomResult check_ire(const LtsiGraph& g, const IndependenceFn& ind0) {
    auto ind = pick(ind0);
    EventSystem es = build_events(g, ind, false);
    size_t total = g.edges.size() * 2;
    for (int c = 0; c < es.classes; ++c) {
        const auto& mem = es.members[static_cast<size_t>(c)];
        if (mem.size() < 2) continue;
        for (size_t i = 0; i < total; ++i) {
            TransRef u = from_di(i);
            bool first = ind(g, mem[0], u);
            for (size_t m = 1; m < mem.size(); ++m)
                if (ind(g, mem[m], u) != first)
                    return {false, "members of one event disagree about " +
                                       describe(g, u) + ": " +
                                       describe(g, mem[0]) + "  vs  " +
                                       describe(g, mem[m])};
        }
    }
    return {};
}

AxiomResult check_rpi(const LtsiGraph& g, const IndependenceFn& ind0) {
    auto ind = pick(ind0);
    size_t total = g.edges.size() * 2;
    for (size_t i = 0; i < total; ++i)
        for (size_t j = 0; j < total; ++j) {
            TransRef t = from_di(i), u = from_di(j);
            if (ind(g, t, u) && !ind(g, reverse(t), u))
                return {false, "independence lost under reversal: " +
                                   describe(g, t) + "  vs  " + describe(g, u)};
        }
    return {};
}

std::vector<std::pair<std::string, AxiomResult>> check_all_axioms(
    const LtsiGraph& g, const IndependenceFn& ind) {
    return {{"SP", check_sp(g, ind)},   {"BTI", check_bti(g, ind)},
            {"WF", check_wf(g, ind)},   {"PCI", check_pci(g, ind)},
            {"ID", check_id(g, ind)},   {"IRE", check_ire(g, ind)},
            {"RPI", check_rpi(g, ind)}};
}

// ---------------------------------------------------------------------------
// Events

namespace {

// Finalize a union-find (or precomputed class array) into an EventSystem.
EventSystem finalize(const LtsiGraph& g, const std::vector<int>& raw_class,
                     bool enforce_labels) {
    EventSystem es;
    size_t total = g.edges.size() * 2;
    es.class_id.assign(total, -1);
    std::unordered_map<int, int> remap;
    for (size_t i = 0; i < total; ++i) {
        auto [it, fresh] =
            remap.try_emplace(raw_class[i], static_cast<int>(remap.size()));
        (void)fresh;
        es.class_id[i] = it->second;
    }
    es.classes = static_cast<int>(remap.size());
    es.members.resize(static_cast<size_t>(es.classes));
    es.rev_class.assign(static_cast<size_t>(es.classes), -1);
    es.cls_key.resize(static_cast<size_t>(es.classes));
    es.cls_forward.resize(static_cast<size_t>(es.classes));
    es.cls_label.resize(static_cast<size_t>(es.classes));
    for (size_t i = 0; i < total; ++i) {
        TransRef t = from_di(i);
        auto c = static_cast<size_t>(es.class_id[i]);
        if (es.members[c].empty()) {
            es.cls_key[c] = key_of(label_of(g, t));
            es.cls_forward[c] = t.forward;
            es.cls_label[c] = label_of(g, t);
        } else {
            if (enforce_labels && !(label_of(g, t) == es.cls_label[c]))
                throw domain_error(
                    "event members disagree on the proof label: " +
                    to_string(es.cls_label[c]) + " vs " +
                    to_string(label_of(g, t)));
            if (es.cls_forward[c] != t.forward)
                throw domain_error("event mixes directions");
        }
        es.members[c].push_back(t);
        int rc = es.class_id[i ^ 1];
        if (es.rev_class[c] == -1)
            es.rev_class[c] = rc;
        else if (es.rev_class[c] != rc)
            throw domain_error("event reversal is not well-defined");
    }
    return es;
}

EventSystem build_events(const LtsiGraph& g, const IndependenceFn& ind0,
                         bool enforce_labels) {
    auto ind = pick(ind0);
    size_t total = g.edges.size() * 2;
    UnionFind uf(total);
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        auto ts = transitions_from(g, static_cast<int>(n));
        for (TransRef t : ts)
            for (TransRef u : ts) {
                if (t == u || !ind(g, t, u)) continue;
                for (auto [up, tp] : completions(g, t, u)) {
                    uf.unite(static_cast<int>(di(t)), static_cast<int>(di(tp)));
                    uf.unite(static_cast<int>(di(reverse(t))),
                             static_cast<int>(di(reverse(tp))));
                    uf.unite(static_cast<int>(di(u)), static_cast<int>(di(up)));
                    uf.unite(static_cast<int>(di(reverse(u))),
                             static_cast<int>(di(reverse(up))));
                }
            }
    }
    std::vector<int> raw(total);
    for (size_t i = 0; i < total; ++i) raw[i] = uf.find(static_cast<int>(i));
    return finalize(g, raw, enforce_labels);
}

}  // namespace

EventSystem events_diamond(const LtsiGraph& g, const IndependenceFn& ind) {
    const std::vector<std::pair<std::string, AxiomResult>> gate{
        {"SP", check_sp(g, ind)},
        {"BTI", check_bti(g, ind)},
        {"WF", check_wf(g, ind)}};
    for (const auto& [name, res] : gate)
        if (!res.holds)
            throw domain_error("axioms failed (" + name + "): " + res.detail);
    return build_events(g, ind, true);
}

namespace {

// Connected components of the node graph after deleting all edges keyed k.
std::vector<int> components_avoiding(const LtsiGraph& g, Key k) {
    UnionFind uf(g.nodes.size());
    for (const auto& ed : g.edges)
        if (key_of(ed.label) != k) uf.unite(ed.src, ed.tgt);
    std::vector<int> comp(g.nodes.size());
    for (size_t n = 0; n < g.nodes.size(); ++n)
        comp[n] = uf.find(static_cast<int>(n));
    return comp;
}

}  // namespace

EventSystem events_by_key(const LtsiGraph& g) {
    size_t total = g.edges.size() * 2;
    std::set<Key> ks;
    for (const auto& ed : g.edges) ks.insert(key_of(ed.label));
    std::vector<int> raw(total, -1);
    int next = 0;
    for (Key k : ks) {
        auto comp = components_avoiding(g, k);
        std::map<int, int> cls_of_comp;
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (key_of(g.edges[e].label) != k) continue;
            int root = comp[static_cast<size_t>(g.edges[e].tgt)];
            auto [it, fresh] = cls_of_comp.try_emplace(root, next);
            if (fresh) next += 2;  // forward class and its reverse
            raw[e * 2] = it->second;
            raw[e * 2 + 1] = it->second + 1;
        }
    }
    return finalize(g, raw, false);
}

bool event_key_equiv(const LtsiGraph& g, TransRef t1, TransRef t2) {
    Key k1 = key_of(label_of(g, t1)), k2 = key_of(label_of(g, t2));
    if (k1 != k2) return false;
    auto comp = components_avoiding(g, k1);
    int a = g.edges[static_cast<size_t>(t1.edge)].tgt;
    int b = g.edges[static_cast<size_t>(t2.edge)].tgt;
    return comp[static_cast<size_t>(a)] == comp[static_cast<size_t>(b)];
}

bool same_partition(const EventSystem& a, const EventSystem& b) {
    if (a.class_id.size() != b.class_id.size()) return false;
    std::unordered_map<int, int> fwd, bwd;
    for (size_t i = 0; i < a.class_id.size(); ++i) {
        int ca = a.class_id[i], cb = b.class_id[i];
        auto [itf, ff] = fwd.try_emplace(ca, cb);
        if (!ff && itf->second != cb) return false;
        auto [itb, fb] = bwd.try_emplace(cb, ca);
        if (!fb && itb->second != ca) return false;
    }
    return true;
}

int count(const EventSystem& es, const TransPath& r, int cls) {
    int n = 0;
    for (TransRef t : r) {
        int c = es.id(t);
        if (c == cls)
            ++n;
        else if (c == es.rev_class[static_cast<size_t>(cls)])
            --n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// Causality

namespace {

bool contains(const std::vector<int>& sorted, int x) {
    return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::vector<int> with_event(const std::vector<int>& sorted, int x) {
    std::vector<int> out = sorted;
    out.insert(std::lower_bound(out.begin(), out.end(), x), x);
    return out;
}

void require_forward(const CausalInfo& ci, int e) {
    if (e < 0 || e >= ci.es.classes ||
        !ci.es.cls_forward[static_cast<size_t>(e)])
        throw domain_error("causality is defined on forward events");
}

}  // namespace

CausalInfo analyze_causality(const LtsiGraph& g) {
    CausalInfo ci;
    ci.g = &g;
    ci.es = events_diamond(g);
    ci.node_events.assign(g.nodes.size(), {});
    std::vector<bool> seen(g.nodes.size(), false);
    std::vector<int> queue{g.root};
    seen[static_cast<size_t>(g.root)] = true;
    for (size_t head = 0; head < queue.size(); ++head) {
        int n = queue[head];
        for (int e : g.out_edges[static_cast<size_t>(n)]) {
            int cls = ci.es.id(TransRef{e, true});
            int m = g.edges[static_cast<size_t>(e)].tgt;
            auto ev = with_event(ci.node_events[static_cast<size_t>(n)], cls);
            if (!seen[static_cast<size_t>(m)]) {
                seen[static_cast<size_t>(m)] = true;
                ci.node_events[static_cast<size_t>(m)] = std::move(ev);
                queue.push_back(m);
            } else if (ci.node_events[static_cast<size_t>(m)] != ev) {
                throw domain_error(
                    "event sets are not path-independent at node " +
                    g.node_names[static_cast<size_t>(m)]);
            }
        }
    }
    for (size_t n = 0; n < g.nodes.size(); ++n) {
        if (!seen[n])
            throw domain_error("node not forward-reachable from the root: " +
                               g.node_names[n]);
        std::vector<Key> ev_keys;
        for (int c : ci.node_events[n])
            ev_keys.push_back(ci.es.cls_key[static_cast<size_t>(c)]);
        std::sort(ev_keys.begin(), ev_keys.end());
        auto term_keys = keys(g.nodes[n]);
        std::sort(term_keys.begin(), term_keys.end());
        if (ev_keys != term_keys)
            throw domain_error("event keys do not match the keys of node " +
                               g.node_names[n]);
    }
    return ci;
}

const std::vector<int>& ev_of(const CausalInfo& ci, int node) {
    return ci.node_events[static_cast<size_t>(node)];
}

const std::vector<int>& ev_of(const CausalInfo& ci, const ProcPtr& x) {
    int n = ci.g->node_id(x);
    if (n < 0) throw domain_error("process is not a node of the graph");
    return ev_of(ci, n);
}

int event_of_key(const CausalInfo& ci, int node, Key k) {
    for (int c : ci.node_events[static_cast<size_t>(node)])
        if (ci.es.cls_key[static_cast<size_t>(c)] == k) return c;
    return -1;
}

bool causal_leq(const CausalInfo& ci, int e1, int e2) {
    require_forward(ci, e1);
    require_forward(ci, e2);
    if (e1 == e2) return true;
    for (TransRef d : ci.es.members[static_cast<size_t>(e2)])
        if (!contains(ci.node_events[static_cast<size_t>(src_of(*ci.g, d))],
                      e1))
            return false;
    return true;
}

bool conflict(const CausalInfo& ci, int e1, int e2) {
    require_forward(ci, e1);
    require_forward(ci, e2);
    if (e1 == e2) return false;
    for (const auto& ev : ci.node_events)
        if (contains(ev, e1) && contains(ev, e2)) return false;
    return true;
}

bool coind(const CausalInfo& ci, int e1, int e2) {
    for (TransRef a : ci.es.members[static_cast<size_t>(e1)])
        for (TransRef b : ci.es.members[static_cast<size_t>(e2)])
            if (src_of(*ci.g, a) == src_of(*ci.g, b) &&
                label_independent(*ci.g, a, b))
                return true;
    return false;
}

bool composable_events(const CausalInfo& ci, int e1, int e2) {
    for (TransRef a : ci.es.members[static_cast<size_t>(e1)])
        for (TransRef b : ci.es.members[static_cast<size_t>(e2)])
            if (tgt_of(*ci.g, a) == src_of(*ci.g, b)) return true;
    return false;
}

bool immediate_pred(const CausalInfo& ci, int e1, int e2) {
    if (e1 == e2 || !causal_leq(ci, e1, e2)) return false;
    for (int c = 0; c < ci.es.classes; ++c) {
        if (c == e1 || c == e2 || !ci.es.cls_forward[static_cast<size_t>(c)])
            continue;
        if (causal_leq(ci, e1, c) && causal_leq(ci, c, e2)) return false;
    }
    return true;
}

std::string to_string(EventRel r) {
    switch (r) {
        case EventRel::Equal: return "equal";
        case EventRel::Causes: return "causes";
        case EventRel::CausedBy: return "caused-by";
        case EventRel::Conflict: return "conflict";
        case EventRel::CoreIndependent: return "core-independent";
    }
    return "?";
}

EventRel polychotomy(const CausalInfo& ci, int e1, int e2) {
    require_forward(ci, e1);
    require_forward(ci, e2);
    bool eq = e1 == e2;
    bool lt = !eq && causal_leq(ci, e1, e2);
    bool gt = !eq && causal_leq(ci, e2, e1);
    bool cf = conflict(ci, e1, e2);
    bool co = coind(ci, e1, e2);
    int hits = int(eq) + int(lt && !gt) + int(gt && !lt) + int(lt && gt) +
               int(cf) + int(co);
    if (lt && gt)
        throw domain_error("distinct events mutually causally ordered");
    if (hits != 1)
        throw domain_error("event classification is not exclusive (" +
                           std::to_string(hits) + " cases hold)");
    if (eq) return EventRel::Equal;
    if (lt) return EventRel::Causes;
    if (gt) return EventRel::CausedBy;
    if (cf) return EventRel::Conflict;
    return EventRel::CoreIndependent;
}

// ---------------------------------------------------------------------------
// Key independence

bool key_independent_direct(const LtsiGraph& g, TransRef t, TransRef u) {
    if (src_of(g, t) != src_of(g, u)) return false;
    if (key_of(label_of(g, t)) == key_of(label_of(g, u))) return false;
    return !completions(g, t, u).empty();
}

bool key_independent(const LtsiGraph& g, TransRef t, TransRef u) {
    size_t total = g.edges.size() * 2;
    Key kt = key_of(label_of(g, t)), ku = key_of(label_of(g, u));
    std::vector<TransRef> ts, us;
    for (size_t i = 0; i < total; ++i) {
        TransRef c = from_di(i);
        if (key_of(label_of(g, c)) == kt && event_key_equiv(g, t, c))
            ts.push_back(c);
        if (key_of(label_of(g, c)) == ku && event_key_equiv(g, u, c))
            us.push_back(c);
    }
    for (TransRef a : ts)
        for (TransRef b : us)
            if (key_independent_direct(g, a, b)) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Parabolic normalization

std::pair<TransPath, TransPath> parabolic_normalize(const LtsiGraph& g,
                                                    const TransPath& r,
                                                    int start) {
    if (!valid_path(g, r, start)) throw domain_error("not a path in the graph");
    TransPath p = r;
    for (;;) {
        size_t i = 0;
        while (i + 1 < p.size() && !(p[i].forward && !p[i + 1].forward)) ++i;
        if (i + 1 >= p.size()) break;
        if (p[i + 1].edge == p[i].edge) {
            p.erase(p.begin() + static_cast<long>(i),
                    p.begin() + static_cast<long>(i) + 2);
            continue;
        }
        TransRef x = reverse(p[i]);  // backward, coinitial with y at the peak
        TransRef y = p[i + 1];
        auto sq = completions(g, x, y);
        if (sq.empty())
            throw domain_error("missing square while normalizing at " +
                               describe(g, x) + "  /  " + describe(g, y));
        auto [yp, xp] = sq.front();
        p[i] = yp;
        p[i + 1] = reverse(xp);
    }
    size_t split = 0;
    while (split < p.size() && !p[split].forward) ++split;
    for (size_t j = split; j < p.size(); ++j)
        if (!p[j].forward)
            throw domain_error("normalization left a stray backward step");
    TransPath s, s2;
    for (size_t j = split; j-- > 0;) s.push_back(reverse(p[j]));
    for (size_t j = split; j < p.size(); ++j) s2.push_back(p[j]);
    return {std::move(s), std::move(s2)};
}

}  // namespace ccsk
