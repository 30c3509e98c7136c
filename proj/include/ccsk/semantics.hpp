#ifndef CCSK_SEMANTICS_HPP
#define CCSK_SEMANTICS_HPP

// Forward/backward operational semantics and state-space exploration.
//
// Forward rules (backward rules are their exact mirrors):
//   act:  a.X  --a[k]--> a[k].X            when keys(X) = {}
//   pre:  extends under b[k] prefixes      when key(label) != k
//   res:  extends under \n                 when action(label) not in {n,'n}
//   parL: X|Y steps in X, label gets |L    when key(label) not in keys(Y)
//   syn:  complementary simple steps of X and Y with one shared key
//   sumL: X+Y steps in X, label gets +L    when keys(Y) = {}
//
// A forward step needs a key for the executed prefix: canonical mode uses the
// smallest natural not in keys(source); with_key mode fixes it explicitly.

#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccsk/syntax.hpp"

namespace ccsk {

struct Transition {
    ProcPtr src, tgt;
    ProofLabel label;
    bool forward = true;
};

Transition reverse(const Transition& t);

// One transition per derivable proof-label skeleton, all carrying the
// canonical key min_fresh_key(p).
std::vector<Transition> forward_steps(const ProcPtr& p);
// All forward transitions using exactly key k.
// Throws domain_error when k already occurs in p (the key must be fresh).
std::vector<Transition> forward_steps_with_key(const ProcPtr& p, Key k);
std::vector<Transition> backward_steps(const ProcPtr& p);

// Plain view of a proved transition: proof structure dropped.
struct PlainTransition {
    ProcPtr src, tgt;
    Label act;
    Key key = 0;
    bool forward = true;
};

PlainTransition erase(const Transition& t);
// Reconstructs the unique proved transition over a plain one.
// Throws domain_error when the plain transition is not derivable.
Transition enrich(const PlainTransition& t);
// Target-free convenience form; throws domain_error when no or several
// proved transitions match (e.g. "a|a" fires a[0] two ways).
Transition enrich(const ProcPtr& src, const Label& act, Key key, bool forward);

// True when some backward path from p ends in a standard process.
bool is_reachable(const ProcPtr& p);

// ---------------------------------------------------------------------------
// Explored graph
//
// Nodes: closure of the standard root under canonical forward steps, all
// backward steps, and commuting squares — whenever two coinitial forward
// edges carry independent labels, the joint state that fires both is also a
// node. Smallest-fresh-key allocation alone can miss that joint state, and
// every analysis downstream assumes independent coinitial pairs commute.
// Edges: every derivable forward transition between nodes (equivalently:
// every backward step from a node, reversed). Each edge stands for a forward
// transition and its reverse.

struct explore_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LtsiGraph {
    struct Edge {
        int src, tgt;
        ProofLabel label;
    };

    std::vector<ProcPtr> nodes;  // nodes[0] is the root
    std::vector<std::string> node_names;
    std::unordered_map<std::string, int> node_index;
    std::vector<Edge> edges;
    std::vector<std::vector<int>> out_edges, in_edges;

    int root = 0;
    // When explore() was handed a keyed root: the node matching it up to an
    // injective key renaming, else -1.
    int requested_instance = -1;

    int node_id(const ProcPtr& p) const;  // -1 when absent
};

// A directed use of an edge: the forward transition or its reverse.
struct TransRef {
    int edge = -1;
    bool forward = true;
    bool operator==(const TransRef&) const = default;
};

int src_of(const LtsiGraph& g, TransRef t);
int tgt_of(const LtsiGraph& g, TransRef t);
const ProofLabel& label_of(const LtsiGraph& g, TransRef t);
TransRef reverse(TransRef t);
Transition materialize(const LtsiGraph& g, TransRef t);

// All directed transitions with source n (forward out-edges plus reversed
// in-edges).
std::vector<TransRef> transitions_from(const LtsiGraph& g, int n);

// Paths are composable sequences of directed transitions.
using TransPath = std::vector<TransRef>;
bool valid_path(const LtsiGraph& g, const TransPath& r, int start);

LtsiGraph explore(const ProcPtr& root, size_t max_nodes = 2'000'000);

std::string graph_to_json(const LtsiGraph& g);
std::string graph_to_dot(const LtsiGraph& g);

}  // namespace ccsk

#endif
