#ifndef CCSK_BISIM_HPP
#define CCSK_BISIM_HPP

// Deciders for the three behavioural equivalences on keyed processes.
//
// KP: forward-only game from a standard pair. Every matched state carries a
//     bijection between executed events that preserves action labels and the
//     key order; under lockstep canonical key allocation both sides always
//     hold the same key set and the bijection is the identity on keys.
// DP: same game skeleton; order preservation is replaced by a per-move
//     condition: maximal events of the pre-move states must relate to the
//     fired transition identically (dependent on both sides or neither).
// FR: forward and backward game on the literal processes, matching action
//     labels and keys exactly. Fresh forward keys are canonicalized to the
//     smallest key fresh for both sides; keys held by only one side are
//     enumerated as attacks (the other side can never answer them forward).
//
// Failure verdicts carry the attacker strategy as a readable move list.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ccsk/syntax.hpp"

namespace ccsk {

using KeyBijection = std::map<Key, Key>;

enum class BisimKind { KP, DP, FR };

struct GameTriple {
    ProcPtr left, right;
    KeyBijection f;        // left key -> right key (events named by keys)
    bool grounded = true;  // derived from the root pair via the clauses
};

struct BisimVerdict {
    bool equivalent = false;
    // Clause-closed set of matched states when equivalent; empty otherwise.
    std::vector<GameTriple> witness;
    // Attacker strategy (one line per ply) when not equivalent.
    std::vector<std::string> distinguishing;
};

// Standard inputs only; throws domain_error otherwise.
BisimVerdict kp_bisimilar(const ProcPtr& p, const ProcPtr& q);
BisimVerdict dp_bisimilar(const ProcPtr& p, const ProcPtr& q);

// Keyed processes: plays the game between the origins and searches the
// surviving matched states for the pair (x, y) up to an injective key
// renaming on each side; the induced event bijection is reported in the
// witness head. Inputs must be reachable.
BisimVerdict kp_bisimilar_from_origin(const ProcPtr& x, const ProcPtr& y);
BisimVerdict dp_bisimilar_from_origin(const ProcPtr& x, const ProcPtr& y);

// Reachable inputs; throws domain_error otherwise.
BisimVerdict fr_bisimilar(const ProcPtr& x, const ProcPtr& y);

// Least set of triples derivable from (p, q, empty bijection) by matched
// forward moves whose successors pass the per-kind checks. KP or DP only.
std::vector<GameTriple> grounded_closure(const ProcPtr& p, const ProcPtr& q,
                                         BisimKind kind);

// Views f as a bijection between the events of x and of y (events are named
// by their keys) and reports (label_preserving, order_preserving).
// Throws domain_error unless f is a bijection keys(x) -> keys(y).
std::pair<bool, bool> check_bijection(const KeyBijection& f, const ProcPtr& x,
                                      const ProcPtr& y);

}  // namespace ccsk

#endif
