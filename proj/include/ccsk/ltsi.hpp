#ifndef CCSK_LTSI_HPP
#define CCSK_LTSI_HPP

// Reversibility axioms, events, causality and path normalization over an
// explored graph.
//
// Two directed transitions of one graph are independent iff their proof
// labels are (all transitions of a graph share the origin, so the
// connectedness requirement is met). The axiom checkers accept a pluggable
// independence predicate so tests can inject faulty relations.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ccsk/label_relations.hpp"
#include "ccsk/semantics.hpp"

namespace ccsk {

using IndependenceFn =
    std::function<bool(const LtsiGraph&, TransRef, TransRef)>;

bool label_independent(const LtsiGraph& g, TransRef a, TransRef b);
bool label_dependent(const LtsiGraph& g, TransRef a, TransRef b);

struct AxiomResult {
    bool holds = true;
    std::string detail;  // first counterexample when violated
};

// SP: coinitial independent transitions close into a square with the same
//     directed labels.
// BTI: distinct coinitial backward transitions are independent.
// WF: every forward edge adds exactly one key, so reverse computation
//     strictly shrinks the key set and cannot run forever.
// PCI: for every square over an independent coinitial pair (t,u) with
//     completion (u',t'), u' is independent of the reverse of t.
// ID: every non-degenerate square (residuals distinct for same-direction
//     sides, endpoints distinct otherwise) has independent sides.
// IRE: members of one event are independent of exactly the same transitions.
// RPI: independence is invariant under reversing either argument.
AxiomResult check_sp(const LtsiGraph& g, const IndependenceFn& ind = {});
AxiomResult check_bti(const LtsiGraph& g, const IndependenceFn& ind = {});
AxiomResult check_wf(const LtsiGraph& g, const IndependenceFn& ind = {});
AxiomResult check_pci(const LtsiGraph& g, const IndependenceFn& ind = {});
AxiomResult check_id(const LtsiGraph& g, const IndependenceFn& ind = {});
AxiomResult check_ire(const LtsiGraph& g, const IndependenceFn& ind = {});
AxiomResult check_rpi(const LtsiGraph& g, const IndependenceFn& ind = {});

// Insertion-ordered (name, result) pairs for the seven axioms.
std::vector<std::pair<std::string, AxiomResult>> check_all_axioms(
    const LtsiGraph& g, const IndependenceFn& ind = {});

// ---------------------------------------------------------------------------
// Events: partition of the directed transitions such that parallel sides of
// every square over an independent coinitial pair are identified, and the
// partition is closed under reversal. All members of a class share one proof
// label (hence one key); the class of the reverses is the reverse event.

struct EventSystem {
    std::vector<int> class_id;  // per directed transition: edge*2 + (fwd?0:1)
    int classes = 0;
    std::vector<std::vector<TransRef>> members;
    std::vector<int> rev_class;
    std::vector<Key> cls_key;
    std::vector<bool> cls_forward;
    std::vector<ProofLabel> cls_label;

    int id(TransRef t) const {
        return class_id[static_cast<size_t>(t.edge) * 2 + (t.forward ? 0 : 1)];
    }
};

// Diamond closure. Verifies SP, BTI and WF first and throws domain_error on
// failure; the closure is only meaningful on pre-reversible graphs.
EventSystem events_diamond(const LtsiGraph& g, const IndependenceFn& ind = {});

// Independent oracle: forward transitions share an event iff they carry the
// same key k and their targets are joined by a path avoiding key k; extended
// to backward transitions through their forward versions.
EventSystem events_by_key(const LtsiGraph& g);

bool event_key_equiv(const LtsiGraph& g, TransRef t1, TransRef t2);

// True when the two systems induce the same partition (class ids may differ).
bool same_partition(const EventSystem& a, const EventSystem& b);

// +1 per step in e, -1 per step in the reverse event, else 0.
int count(const EventSystem& es, const TransPath& r, int cls);

// ---------------------------------------------------------------------------
// Causality on forward events. ev(node) is the set of forward events with a
// member on every rooted path to the node; it is computed by forward
// propagation from the root and equals the events of keys(node).

struct CausalInfo {
    const LtsiGraph* g = nullptr;
    EventSystem es;
    std::vector<std::vector<int>> node_events;  // sorted forward class ids
};

CausalInfo analyze_causality(const LtsiGraph& g);

const std::vector<int>& ev_of(const CausalInfo& ci, int node);
const std::vector<int>& ev_of(const CausalInfo& ci, const ProcPtr& x);
// Forward event holding key k at the given node; -1 when k is not there.
int event_of_key(const CausalInfo& ci, int node, Key k);

// e1 <= e2: every forward-only rooted path through e2 passes e1 first,
// decided as: every member of e2 starts at a node whose ev contains e1.
bool causal_leq(const CausalInfo& ci, int e1, int e2);
// No node carries both events.
bool conflict(const CausalInfo& ci, int e1, int e2);
// Some coinitial members are independent.
bool coind(const CausalInfo& ci, int e1, int e2);
// Some member of e1 ends where a member of e2 starts.
bool composable_events(const CausalInfo& ci, int e1, int e2);
// e1 < e2 with no event strictly between.
bool immediate_pred(const CausalInfo& ci, int e1, int e2);

enum class EventRel { Equal, Causes, CausedBy, Conflict, CoreIndependent };
std::string to_string(EventRel r);

// Exactly one of the five holds on forward events; throws domain_error if
// the classification is not exclusive.
EventRel polychotomy(const CausalInfo& ci, int e1, int e2);

// ---------------------------------------------------------------------------
// Key independence: the square-based relation defined through keys alone.

// Coinitial, distinct keys, and a completing square with the same directed
// labels.
bool key_independent_direct(const LtsiGraph& g, TransRef t, TransRef u);
// Closes the direct form under key equivalence on both arguments.
bool key_independent(const LtsiGraph& g, TransRef t, TransRef u);

// ---------------------------------------------------------------------------
// Parabolic normalization: rewrites a path to backward-then-forward shape by
// cancelling or commuting every forward-then-backward peak. Returns (s, s')
// with the normalized path being reverse(s) followed by s'; both returned
// halves are forward-only. Throws domain_error when a needed square is
// missing (impossible on pre-reversible graphs).
std::pair<TransPath, TransPath> parabolic_normalize(const LtsiGraph& g,
                                                    const TransPath& r,
                                                    int start);

}  // namespace ccsk

#endif
