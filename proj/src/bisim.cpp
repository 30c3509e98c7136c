#include "ccsk/bisim.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "ccsk/keyorder.hpp"
#include "ccsk/label_relations.hpp"
#include "ccsk/semantics.hpp"

namespace ccsk {

namespace {

constexpr size_t kMaxPairs = 200'000;

std::string pair_key(const ProcPtr& a, const ProcPtr& b) {
    return render(a) + '\x01' + render(b);
}

// ---------------------------------------------------------------------------
// Lockstep forward game for KP and DP. Both sides start standard and always
// allocate the same canonical fresh key, so the event bijection of every
// state is the identity on keys.

struct MovePair {
    int i, j, succ;
    bool ok1, ok2;  // move condition for clause 1 (left attacks) / clause 2
};

struct LockState {
    ProcPtr a, b;
    bool valid = true;
    std::string why;
    std::vector<Transition> ma, mb;
    std::vector<MovePair> pairs;
};

struct LockGame {
    BisimKind kind;
    std::vector<LockState> st;
    std::unordered_map<std::string, int> index;
    std::vector<int> round;  // after solve(): -1 alive, 0 invalid, r killed
};

// Identity-on-keys validity: actions per key must agree, and for KP the key
// orders must coincide.
void validate(LockState& s, BisimKind kind) {
    const auto& ka = keys(s.a);
    const auto& kb = keys(s.b);
    if (ka != kb)
        throw domain_error("lockstep game lost key-set equality at " +
                           pair_key(s.a, s.b));
    for (Key k : ka) {
        Label la = action_of(event_label_of_key(s.a, k));
        Label lb = action_of(event_label_of_key(s.b, k));
        if (!(la == lb)) {
            s.valid = false;
            s.why = "the event with key " + std::to_string(k) +
                    " is labelled " + to_string(la) + " on the left and " +
                    to_string(lb) + " on the right";
            return;
        }
    }
    if (kind == BisimKind::KP) {
        for (Key k1 : ka)
            for (Key k2 : ka) {
                if (k1 == k2) continue;
                if (leq_keys(s.a, k1, k2) != leq_keys(s.b, k1, k2)) {
                    s.valid = false;
                    s.why = "key order differs: " + std::to_string(k1) +
                            " <= " + std::to_string(k2) +
                            " holds on one side only";
                    return;
                }
            }
    }
}

// Dependence condition of the DP clauses: every maximal event of the
// pre-move process must be dependent on the fired label on both sides or on
// neither. Events are matched by key (identity bijection).
bool dp_condition(const ProcPtr& pre_mine, const ProcPtr& pre_other,
                  const ProofLabel& mine, const ProofLabel& other) {
    for (Key m : maximal_keys(pre_mine)) {
        bool dm = dependent_labels(event_label_of_key(pre_mine, m), mine);
        bool dn = dependent_labels(event_label_of_key(pre_other, m), other);
        if (dm != dn) return false;
    }
    return true;
}

int add_lock_state(LockGame& g, const ProcPtr& a, const ProcPtr& b,
                   std::vector<int>& fresh) {
    auto key = pair_key(a, b);
    auto it = g.index.find(key);
    if (it != g.index.end()) return it->second;
    if (g.st.size() >= kMaxPairs)
        throw explore_limit_error("bisimulation game exceeded " +
                                  std::to_string(kMaxPairs) + " states");
    int id = static_cast<int>(g.st.size());
    g.index.emplace(std::move(key), id);
    g.st.push_back({a, b, true, "", {}, {}, {}});
    validate(g.st.back(), g.kind);
    fresh.push_back(id);
    return id;
}

LockGame build_lock_game(const ProcPtr& p, const ProcPtr& q, BisimKind kind) {
    LockGame g;
    g.kind = kind;
    std::vector<int> queue;
    add_lock_state(g, p, q, queue);
    for (size_t head = 0; head < queue.size(); ++head) {
        int s = queue[head];
        ProcPtr a = g.st[static_cast<size_t>(s)].a;
        ProcPtr b = g.st[static_cast<size_t>(s)].b;
        auto ma = forward_steps(a);
        auto mb = forward_steps(b);
        std::vector<MovePair> pairs;
        for (size_t i = 0; i < ma.size(); ++i)
            for (size_t j = 0; j < mb.size(); ++j) {
                if (!(action_of(ma[i].label) == action_of(mb[j].label)))
                    continue;
                bool ok1 = true, ok2 = true;
                if (kind == BisimKind::DP) {
                    ok1 = dp_condition(a, b, ma[i].label, mb[j].label);
                    ok2 = dp_condition(b, a, mb[j].label, ma[i].label);
                }
                int succ = add_lock_state(g, ma[i].tgt, mb[j].tgt, queue);
                pairs.push_back({static_cast<int>(i), static_cast<int>(j),
                                 succ, ok1, ok2});
            }
        auto& state = g.st[static_cast<size_t>(s)];
        state.ma = std::move(ma);
        state.mb = std::move(mb);
        state.pairs = std::move(pairs);
    }
    return g;
}

// Greatest fixed point by simultaneous rounds; round numbers drive the
// extraction of a shortest distinguishing strategy.
void solve_lock(LockGame& g) {
    size_t n = g.st.size();
    g.round.assign(n, -1);
    for (size_t s = 0; s < n; ++s)
        if (!g.st[s].valid) g.round[s] = 0;
    for (int r = 1;; ++r) {
        std::vector<size_t> kills;
        for (size_t s = 0; s < n; ++s) {
            if (g.round[s] != -1) continue;
            const auto& state = g.st[s];
            bool dead = false;
            for (size_t i = 0; i < state.ma.size() && !dead; ++i) {
                bool answered = false;
                for (const auto& mp : state.pairs)
                    if (mp.i == static_cast<int>(i) && mp.ok1 &&
                        g.round[static_cast<size_t>(mp.succ)] == -1) {
                        answered = true;
                        break;
                    }
                dead = !answered;
            }
            for (size_t j = 0; j < state.mb.size() && !dead; ++j) {
                bool answered = false;
                for (const auto& mp : state.pairs)
                    if (mp.j == static_cast<int>(j) && mp.ok2 &&
                        g.round[static_cast<size_t>(mp.succ)] == -1) {
                        answered = true;
                        break;
                    }
                dead = !answered;
            }
            if (dead) kills.push_back(s);
        }
        if (kills.empty()) break;
        for (size_t s : kills) g.round[s] = r;
    }
}

// One line per ply: the attacker move all of whose admissible replies lead
// to states killed in strictly earlier rounds, then the defender's most
// resilient reply.
std::vector<std::string> lock_trace(const LockGame& g, int start) {
    std::vector<std::string> out;
    int s = start;
    for (;;) {
        const auto& state = g.st[static_cast<size_t>(s)];
        if (g.round[static_cast<size_t>(s)] == 0) {
            out.push_back("(" + render(state.a) + " , " + render(state.b) +
                          ") admits no identity-key event bijection: " +
                          state.why);
            return out;
        }
        const int my = g.round[static_cast<size_t>(s)];
        int best_succ = -1, best_round = -1;
        std::string line;
        for (size_t i = 0; i < state.ma.size() && line.empty(); ++i) {
            bool all_dead = true;
            int succ = -1, rd = -1;
            size_t candidates = 0;
            for (const auto& mp : state.pairs) {
                if (mp.i != static_cast<int>(i) || !mp.ok1) continue;
                ++candidates;
                int r = g.round[static_cast<size_t>(mp.succ)];
                if (r == -1 || r >= my) {  // this attack did not kill s
                    all_dead = false;
                    break;
                }
                if (r > rd) rd = r, succ = mp.succ;
            }
            if (!all_dead) continue;
            line = "left fires " + to_string(state.ma[i].label);
            if (candidates == 0) {
                bool any_action = false;
                for (const auto& mp : state.pairs)
                    if (mp.i == static_cast<int>(i)) any_action = true;
                line += any_action
                            ? "; every right reply breaks the dependence "
                              "condition"
                            : "; right has no reply with this action";
                out.push_back(line);
                return out;
            }
            best_succ = succ;
            best_round = rd;
        }
        for (size_t j = 0; j < state.mb.size() && line.empty(); ++j) {
            bool all_dead = true;
            int succ = -1, rd = -1;
            size_t candidates = 0;
            for (const auto& mp : state.pairs) {
                if (mp.j != static_cast<int>(j) || !mp.ok2) continue;
                ++candidates;
                int r = g.round[static_cast<size_t>(mp.succ)];
                if (r == -1 || r >= my) {
                    all_dead = false;
                    break;
                }
                if (r > rd) rd = r, succ = mp.succ;
            }
            if (!all_dead) continue;
            line = "right fires " + to_string(state.mb[j].label);
            if (candidates == 0) {
                bool any_action = false;
                for (const auto& mp : state.pairs)
                    if (mp.j == static_cast<int>(j)) any_action = true;
                line += any_action
                            ? "; every left reply breaks the dependence "
                              "condition"
                            : "; left has no reply with this action";
                out.push_back(line);
                return out;
            }
            best_succ = succ;
            best_round = rd;
        }
        if (line.empty()) {
            out.push_back("internal: no winning attack found at (" +
                          render(state.a) + " , " + render(state.b) + ")");
            return out;
        }
        (void)best_round;
        const auto& nxt = g.st[static_cast<size_t>(best_succ)];
        line += "; defender answers towards (" + render(nxt.a) + " , " +
                render(nxt.b) + ")";
        out.push_back(line);
        s = best_succ;
    }
}

KeyBijection identity_on(const ProcPtr& a) {
    KeyBijection f;
    for (Key k : keys(a)) f[k] = k;
    return f;
}

// States reachable from the root through alive matched pairs; this set is a
// bisimulation witness (closed under both clauses).
std::vector<int> alive_closure(const LockGame& g) {
    std::vector<int> out;
    if (g.round[static_cast<size_t>(0)] != -1) return out;
    std::vector<bool> seen(g.st.size(), false);
    std::vector<int> queue{0};
    seen[0] = true;
    while (!queue.empty()) {
        int s = queue.back();
        queue.pop_back();
        out.push_back(s);
        for (const auto& mp : g.st[static_cast<size_t>(s)].pairs) {
            if (!(mp.ok1 || mp.ok2)) continue;
            if (g.round[static_cast<size_t>(mp.succ)] != -1) continue;
            if (!seen[static_cast<size_t>(mp.succ)]) {
                seen[static_cast<size_t>(mp.succ)] = true;
                queue.push_back(mp.succ);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

BisimVerdict decide_lockstep(const ProcPtr& p, const ProcPtr& q,
                             BisimKind kind) {
    if (!is_standard(p) || !is_standard(q))
        throw domain_error(
            "non-standard input: use the from_origin decider for keyed "
            "processes");
    LockGame g = build_lock_game(p, q, kind);
    solve_lock(g);
    BisimVerdict v;
    v.equivalent = g.round[0] == -1;
    if (v.equivalent) {
        for (int s : alive_closure(g))
            v.witness.push_back({g.st[static_cast<size_t>(s)].a,
                                 g.st[static_cast<size_t>(s)].b,
                                 identity_on(g.st[static_cast<size_t>(s)].a),
                                 true});
    } else {
        v.distinguishing = lock_trace(g, 0);
    }
    return v;
}

BisimVerdict decide_from_origin(const ProcPtr& x, const ProcPtr& y,
                                BisimKind kind) {
    if (!is_reachable(x) || !is_reachable(y))
        throw domain_error("unreachable input");
    LockGame g = build_lock_game(origin(x), origin(y), kind);
    solve_lock(g);
    BisimVerdict v;
    if (g.round[0] != -1) {
        v.distinguishing = lock_trace(g, 0);
        v.distinguishing.insert(v.distinguishing.begin(),
                                "the origins are not equivalent:");
        return v;
    }
    auto closure = alive_closure(g);
    for (int s : closure) {
        const auto& st = g.st[static_cast<size_t>(s)];
        auto mx = match_up_to_keys(x, st.a);
        auto my = match_up_to_keys(y, st.b);
        if (!mx || !my) continue;
        // f sends each key of x through the renamings: x -> st.a == st.b -> y.
        std::map<Key, Key> back;
        for (auto [ky, kb] : *my) back[kb] = ky;
        KeyBijection f;
        for (auto [kx, ka] : *mx) f[kx] = back.at(ka);
        v.equivalent = true;
        v.witness.push_back({x, y, std::move(f), true});
        for (int t : closure)
            v.witness.push_back({g.st[static_cast<size_t>(t)].a,
                                 g.st[static_cast<size_t>(t)].b,
                                 identity_on(g.st[static_cast<size_t>(t)].a),
                                 true});
        return v;
    }
    v.distinguishing = {
        "the origins are equivalent, but no surviving matched state equals "
        "(" + render(x) + " , " + render(y) + ") up to key renaming"};
    return v;
}

}  // namespace

BisimVerdict kp_bisimilar(const ProcPtr& p, const ProcPtr& q) {
    return decide_lockstep(p, q, BisimKind::KP);
}

BisimVerdict dp_bisimilar(const ProcPtr& p, const ProcPtr& q) {
    return decide_lockstep(p, q, BisimKind::DP);
}

BisimVerdict kp_bisimilar_from_origin(const ProcPtr& x, const ProcPtr& y) {
    return decide_from_origin(x, y, BisimKind::KP);
}

BisimVerdict dp_bisimilar_from_origin(const ProcPtr& x, const ProcPtr& y) {
    return decide_from_origin(x, y, BisimKind::DP);
}

std::vector<GameTriple> grounded_closure(const ProcPtr& p, const ProcPtr& q,
                                         BisimKind kind) {
    if (kind == BisimKind::FR)
        throw domain_error("grounded closure is defined for KP and DP only");
    if (!is_standard(p) || !is_standard(q))
        throw domain_error("grounded closure starts from standard processes");
    LockGame g = build_lock_game(p, q, kind);
    // Walk only through triples that pass their own checks.
    std::vector<bool> seen(g.st.size(), false);
    std::vector<int> queue;
    std::vector<GameTriple> out;
    if (g.st[0].valid) {
        seen[0] = true;
        queue.push_back(0);
    }
    for (size_t head = 0; head < queue.size(); ++head) {
        int s = queue[head];
        const auto& st = g.st[static_cast<size_t>(s)];
        out.push_back({st.a, st.b, identity_on(st.a), true});
        for (const auto& mp : st.pairs) {
            if (!(mp.ok1 || mp.ok2)) continue;
            if (!g.st[static_cast<size_t>(mp.succ)].valid) continue;
            if (!seen[static_cast<size_t>(mp.succ)]) {
                seen[static_cast<size_t>(mp.succ)] = true;
                queue.push_back(mp.succ);
            }
        }
    }
    return out;
}

std::pair<bool, bool> check_bijection(const KeyBijection& f, const ProcPtr& x,
                                      const ProcPtr& y) {
    const auto& kx = keys(x);
    const auto& ky = keys(y);
    std::set<Key> image;
    for (auto [a, b] : f) {
        if (!has_key(x, a) || !has_key(y, b) || !image.insert(b).second)
            throw domain_error(
                "not a bijection between the events of the two processes");
    }
    if (f.size() != kx.size() || image.size() != ky.size())
        throw domain_error(
            "not a bijection between the events of the two processes");
    bool label = true, order = true;
    for (Key k : kx)
        if (!(action_of(event_label_of_key(x, k)) ==
              action_of(event_label_of_key(y, f.at(k)))))
            label = false;
    for (Key k1 : kx)
        for (Key k2 : kx)
            if (leq_keys(x, k1, k2) != leq_keys(y, f.at(k1), f.at(k2)))
                order = false;
    return {label, order};
}

// ---------------------------------------------------------------------------
// FR game

namespace {

struct FrAttack {
    Transition move;
    std::vector<std::pair<ProofLabel, int>> replies;  // defender label, succ
};

struct FrState {
    ProcPtr a, b;
    std::vector<FrAttack> left, right;
};

struct FrGame {
    std::vector<FrState> st;
    std::unordered_map<std::string, int> index;
    std::vector<int> round;
};

int add_fr_state(FrGame& g, const ProcPtr& a, const ProcPtr& b,
                 std::vector<int>& queue) {
    auto key = pair_key(a, b);
    auto it = g.index.find(key);
    if (it != g.index.end()) return it->second;
    if (g.st.size() >= kMaxPairs)
        throw explore_limit_error("bisimulation game exceeded " +
                                  std::to_string(kMaxPairs) + " states");
    int id = static_cast<int>(g.st.size());
    g.index.emplace(std::move(key), id);
    g.st.push_back({a, b, {}, {}});
    queue.push_back(id);
    return id;
}

// Forward attack keys available against the pair (mine, other): one key
// fresh for both sides represents all of them (the subgames are isomorphic
// under renaming), plus every key the other side already holds, which the
// other side can never answer.
std::vector<Key> attack_keys(const ProcPtr& mine, const ProcPtr& other) {
    std::vector<Key> ks;
    Key shared = std::max(min_fresh_key(mine), min_fresh_key(other));
    while (has_key(mine, shared) || has_key(other, shared)) ++shared;
    ks.push_back(shared);
    for (Key k : keys(other))
        if (!has_key(mine, k)) ks.push_back(k);
    return ks;
}

void expand_fr(FrGame& g, int s, std::vector<int>& queue) {
    ProcPtr a = g.st[static_cast<size_t>(s)].a;
    ProcPtr b = g.st[static_cast<size_t>(s)].b;
    auto build = [&](const ProcPtr& mine, const ProcPtr& other,
                     bool mine_is_left) {
        std::vector<FrAttack> attacks;
        for (Key k : attack_keys(mine, other)) {
            auto mv = forward_steps_with_key(mine, k);
            std::vector<Transition> replies;
            if (!has_key(other, k)) replies = forward_steps_with_key(other, k);
            for (auto& t : mv) {
                FrAttack at{t, {}};
                for (auto& u : replies) {
                    if (!(action_of(u.label) == action_of(t.label))) continue;
                    int succ = mine_is_left
                                   ? add_fr_state(g, t.tgt, u.tgt, queue)
                                   : add_fr_state(g, u.tgt, t.tgt, queue);
                    at.replies.emplace_back(u.label, succ);
                }
                attacks.push_back(std::move(at));
            }
        }
        for (auto& t : backward_steps(mine)) {
            FrAttack at{t, {}};
            for (auto& u : backward_steps(other)) {
                if (!(action_of(u.label) == action_of(t.label)) ||
                    key_of(u.label) != key_of(t.label))
                    continue;
                int succ = mine_is_left ? add_fr_state(g, t.tgt, u.tgt, queue)
                                        : add_fr_state(g, u.tgt, t.tgt, queue);
                at.replies.emplace_back(u.label, succ);
            }
            attacks.push_back(std::move(at));
        }
        return attacks;
    };
    auto left = build(a, b, true);
    auto right = build(b, a, false);
    g.st[static_cast<size_t>(s)].left = std::move(left);
    g.st[static_cast<size_t>(s)].right = std::move(right);
}

void solve_fr(FrGame& g) {
    size_t n = g.st.size();
    g.round.assign(n, -1);
    for (int r = 1;; ++r) {
        std::vector<size_t> kills;
        for (size_t s = 0; s < n; ++s) {
            if (g.round[s] != -1) continue;
            auto dead_side = [&](const std::vector<FrAttack>& attacks) {
                for (const auto& at : attacks) {
                    bool answered = false;
                    for (auto& [lbl, succ] : at.replies)
                        if (g.round[static_cast<size_t>(succ)] == -1) {
                            answered = true;
                            break;
                        }
                    if (!answered) return true;
                }
                return false;
            };
            if (dead_side(g.st[s].left) || dead_side(g.st[s].right))
                kills.push_back(s);
        }
        if (kills.empty()) break;
        for (size_t s : kills) g.round[s] = r;
    }
}

std::string fr_move_text(const Transition& t) {
    return std::string(t.forward ? "fires " : "undoes ") + to_string(t.label);
}

std::vector<std::string> fr_trace(const FrGame& g, int start) {
    std::vector<std::string> out;
    int s = start;
    for (;;) {
        const auto& state = g.st[static_cast<size_t>(s)];
        const int my = g.round[static_cast<size_t>(s)];
        std::string line;
        int best_succ = -1;
        auto scan = [&](const std::vector<FrAttack>& attacks,
                        const char* side) {
            for (const auto& at : attacks) {
                if (!line.empty()) return;
                bool all_dead = true;
                int succ = -1, rd = -1;
                for (auto& [lbl, sc] : at.replies) {
                    int r = g.round[static_cast<size_t>(sc)];
                    if (r == -1 || r >= my) {  // this attack did not kill s
                        all_dead = false;
                        break;
                    }
                    if (r > rd) rd = r, succ = sc;
                }
                if (!all_dead) continue;
                line = std::string(side) + " " + fr_move_text(at.move);
                if (at.replies.empty()) {
                    line += "; no reply matches this action and key";
                    out.push_back(line);
                    line = "\x01";  // sentinel: trace complete
                    return;
                }
                best_succ = succ;
            }
        };
        scan(state.left, "left");
        if (line == "\x01") return out;
        if (line.empty()) scan(state.right, "right");
        if (line == "\x01") return out;
        if (line.empty()) {
            out.push_back("internal: no winning attack found at (" +
                          render(state.a) + " , " + render(state.b) + ")");
            return out;
        }
        const auto& nxt = g.st[static_cast<size_t>(best_succ)];
        line += "; defender answers towards (" + render(nxt.a) + " , " +
                render(nxt.b) + ")";
        out.push_back(line);
        s = best_succ;
    }
}

}  // namespace

BisimVerdict fr_bisimilar(const ProcPtr& x, const ProcPtr& y) {
    if (!is_reachable(x) || !is_reachable(y))
        throw domain_error("unreachable input");
    FrGame g;
    std::vector<int> queue;
    add_fr_state(g, x, y, queue);
    for (size_t head = 0; head < queue.size(); ++head)
        expand_fr(g, queue[head], queue);
    solve_fr(g);
    BisimVerdict v;
    v.equivalent = g.round[0] == -1;
    if (v.equivalent) {
        for (size_t s = 0; s < g.st.size(); ++s)
            if (g.round[s] == -1)
                v.witness.push_back({g.st[s].a, g.st[s].b, {}, true});
    } else {
        v.distinguishing = fr_trace(g, 0);
    }
    return v;
}

}  // namespace ccsk
