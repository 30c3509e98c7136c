#ifndef CCSK_KEYORDER_HPP
#define CCSK_KEYORDER_HPP

// Syntactic partial order on the keys of a process, and the induced notion
// of maximal events. A keyed prefix orders its own key below every key of
// its continuation; all other operators are transparent.

#include <utility>
#include <vector>

#include "ccsk/ltsi.hpp"
#include "ccsk/syntax.hpp"

namespace ccsk {

// Base pairs: (n, k) for every keyed prefix alpha[n].X and every k in
// keys(X), collected structurally.
std::vector<std::pair<Key, Key>> ord(const ProcPtr& x);

// Membership in the reflexive-transitive closure of ord(x).
// Throws domain_error when k1 or k2 is not a key of x.
bool leq_keys(const ProcPtr& x, Key k1, Key k2);

// Covering pairs of the closure: k1 < k2 with nothing strictly between.
std::vector<std::pair<Key, Key>> hasse_pairs(const ProcPtr& x);

// Keys with no strict successor in the order.
std::vector<Key> maximal_keys(const ProcPtr& x);

// Events of x (a node of ci's graph) whose keys are maximal in the order.
std::vector<int> maximal_events(const CausalInfo& ci, int node);

}  // namespace ccsk

#endif
