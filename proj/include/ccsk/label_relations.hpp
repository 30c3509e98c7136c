#ifndef CCSK_LABEL_RELATIONS_HPP
#define CCSK_LABEL_RELATIONS_HPP

// Connectivity, dependence and independence on proof labels, their lifting
// to transitions, and the keyless (forward-only) fragment used to show that
// independence restricts to the classical concurrency relation on proofs.
//
// The three deciders run the defining rules by structural recursion, one
// derivation attempt per rule head; derivations are unique when they exist.

#include <vector>

#include "ccsk/semantics.hpp"
#include "ccsk/syntax.hpp"

namespace ccsk {

enum class RelationKind { Connected, Dependent, Independent, NotConnected };

// Rule heads. Bare prefixes connect to everything (A1/A2); same operator
// head recurses (P1/C1) or is unconditional when directions differ (P2/C2);
// a parallel head meets a synchronisation pair on the matching component
// (S1/S2); two pairs meet componentwise (S3). Mixed heads never connect.
bool connected_labels(const ProofLabel& a, const ProofLabel& b);
// As connectivity, except opposite parallel heads require equal keys and a
// pair meets a pair when one component pair is dependent and the other
// connected.
bool dependent_labels(const ProofLabel& a, const ProofLabel& b);
// No rule involves a bare prefix or opposite sum heads; opposite parallel
// heads require distinct keys; pairs recurse componentwise.
bool independent_labels(const ProofLabel& a, const ProofLabel& b);

// Dependent/Independent/NotConnected; Connected is returned only if the
// complementarity theorem were violated (connected yet neither or both).
RelationKind classify_labels(const ProofLabel& a, const ProofLabel& b);

// True iff both sources erase to the same standard process. Throws
// domain_error when an endpoint is not reachable.
bool connected_transitions(const Transition& a, const Transition& b);
// NotConnected when origins differ, else the label classification.
RelationKind trans_relation(const Transition& a, const Transition& b);

// ---------------------------------------------------------------------------
// Keyless fragment

struct KeylessSimple {
    OpPath path;
    Label act;
    bool operator==(const KeylessSimple&) const = default;
};

struct KeylessSync {
    OpPath path;  // outer path; halves carry complementary actions
    KeylessSimple left, right;
    bool operator==(const KeylessSync&) const = default;
};

using KeylessProofLabel = std::variant<KeylessSimple, KeylessSync>;

KeylessProofLabel strip_keys(const ProofLabel& l);
// Puts k on the action (both halves of a synchronisation share it).
ProofLabel attach_key(const KeylessProofLabel& l, Key k);
std::string to_string(const KeylessProofLabel& l);

// Concurrency on keyless labels. Equivalent to independence after attaching
// distinct keys: smile(a,b) iff attach_key(a,m) independent of
// attach_key(b,n) whenever m != n.
bool smile(const KeylessProofLabel& a, const KeylessProofLabel& b);

// Drops executed prefixes and the untaken branch of any resolved sum.
ProcPtr prune(const ProcPtr& p);
// Splices out every prefix act[k] or 'act[k]; other structure untouched.
// Derivability with label th is preserved when key_of(th) != k and k does
// not occur in the result.
ProcPtr remove_key(const ProcPtr& p, const Label& act, Key k);

// Forward-only keyless semantics on standard processes: prefixes are
// consumed and sums discard the untaken branch.
struct CcspTransition {
    ProcPtr src, tgt;
    KeylessProofLabel label;
};

// Throws domain_error when p is not standard.
std::vector<CcspTransition> ccsp_steps(const ProcPtr& p);

// The keyed transition with key k over t, i.e. the unique forward step of
// t.src whose label strips to t.label and whose target prunes to t.tgt.
// Throws domain_error when none exists.
Transition key_enrich(const CcspTransition& t, Key k);
// Prune both endpoints, strip the label. The result is a derivable keyless
// step whenever t.src prunes without collapsing a sum the label passes
// through (always the case for standard sources).
CcspTransition key_forget(const Transition& t);

}  // namespace ccsk

#endif
