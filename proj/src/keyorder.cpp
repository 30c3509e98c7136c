#include "ccsk/keyorder.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ccsk {

namespace {

void ord_rec(const ProcPtr& p, std::vector<std::pair<Key, Key>>& out) {
    switch (p->kind) {
        case ProcKind::Nil:
            break;
        case ProcKind::KeyedPrefix:
            for (Key k : keys(p->a)) out.emplace_back(p->key, k);
            [[fallthrough]];
        case ProcKind::Prefix:
        case ProcKind::Restrict:
            ord_rec(p->a, out);
            break;
        case ProcKind::Sum:
        case ProcKind::Par:
            ord_rec(p->a, out);
            ord_rec(p->b, out);
            break;
    }
}

// Successor adjacency of the base relation over keys(x).
std::map<Key, std::set<Key>> succ_map(const ProcPtr& x) {
    std::map<Key, std::set<Key>> succ;
    for (Key k : keys(x)) succ[k];
    for (auto [a, b] : ord(x)) succ[a].insert(b);
    return succ;
}

bool reaches(const std::map<Key, std::set<Key>>& succ, Key from, Key to) {
    if (from == to) return true;
    std::set<Key> seen{from};
    std::vector<Key> stack{from};
    while (!stack.empty()) {
        Key k = stack.back();
        stack.pop_back();
        for (Key n : succ.at(k)) {
            if (n == to) return true;
            if (seen.insert(n).second) stack.push_back(n);
        }
    }
    return false;
}

}  // namespace

std::vector<std::pair<Key, Key>> ord(const ProcPtr& x) {
    std::vector<std::pair<Key, Key>> out;
    ord_rec(x, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool leq_keys(const ProcPtr& x, Key k1, Key k2) {
    if (!has_key(x, k1))
        throw domain_error("key absent: " + std::to_string(k1) +
                           " is not a key of " + render(x));
    if (!has_key(x, k2))
        throw domain_error("key absent: " + std::to_string(k2) +
                           " is not a key of " + render(x));
    return reaches(succ_map(x), k1, k2);
}

std::vector<std::pair<Key, Key>> hasse_pairs(const ProcPtr& x) {
    auto succ = succ_map(x);
    const auto& ks = keys(x);
    std::vector<std::pair<Key, Key>> out;
    for (Key a : ks)
        for (Key b : ks) {
            if (a == b || !reaches(succ, a, b)) continue;
            bool covering = true;
            for (Key c : ks)
                if (c != a && c != b && reaches(succ, a, c) &&
                    reaches(succ, c, b)) {
                    covering = false;
                    break;
                }
            if (covering) out.emplace_back(a, b);
        }
    return out;
}

std::vector<Key> maximal_keys(const ProcPtr& x) {
    auto succ = succ_map(x);
    std::vector<Key> out;
    for (Key a : keys(x)) {
        bool maximal = true;
        for (Key b : keys(x))
            if (b != a && reaches(succ, a, b)) {
                maximal = false;
                break;
            }
        if (maximal) out.push_back(a);
    }
    return out;
}

std::vector<int> maximal_events(const CausalInfo& ci, int node) {
    std::vector<int> out;
    for (Key k : maximal_keys(ci.g->nodes[static_cast<size_t>(node)]))
        out.push_back(event_of_key(ci, node, k));
    return out;
}

}  // namespace ccsk
