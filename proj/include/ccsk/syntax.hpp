#ifndef CCSK_SYNTAX_HPP
#define CCSK_SYNTAX_HPP

// Process terms and proof labels for reversible CCS with communication keys.
//
// Grammar (binding tightest to loosest: restriction, prefix, parallel, sum):
//   proc := sum
//   sum  := par ("+" par)*
//   par  := pre ("|" pre)*
//   pre  := label "." pre | label "[" nat "]" "." pre | label | label "[" nat "]" | atom
//   atom := "0" | "(" proc ")" | atom "\" name
// Labels: a name ("a"), a co-name ("'a"), or "tau". A prefix of 0 may drop
// the trailing ".0". Keys are naturals attached to executed prefixes.

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ccsk {

using Key = std::uint32_t;

struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Action labels

struct Label {
    std::string name;  // empty means tau
    bool bar = false;  // co-name marker; tau is never barred

    static Label tau() { return Label{}; }
    static Label act(std::string n, bool barred = false) { return Label{std::move(n), barred}; }

    bool is_tau() const { return name.empty(); }
    Label complement() const { return is_tau() ? *this : Label{name, !bar}; }

    bool operator==(const Label&) const = default;
    auto operator<=>(const Label&) const = default;
};

std::string to_string(const Label& l);

// ---------------------------------------------------------------------------
// Process terms (immutable, shared)

enum class ProcKind { Nil, Prefix, KeyedPrefix, Restrict, Sum, Par };

struct Proc;
using ProcPtr = std::shared_ptr<const Proc>;

struct Proc {
    ProcKind kind = ProcKind::Nil;
    Label act;             // Prefix, KeyedPrefix
    Key key = 0;           // KeyedPrefix
    std::string res;       // Restrict: restricted name (both polarities)
    ProcPtr a, b;          // Prefix/KeyedPrefix/Restrict use a; Sum/Par use a and b

    // Cached derived data, filled by the factory functions.
    std::vector<Key> keyset;  // sorted, deduplicated
    int prefix_count = 0;
};

ProcPtr nil();
ProcPtr prefix(Label l, ProcPtr p);
ProcPtr keyed_prefix(Label l, Key k, ProcPtr p);
ProcPtr restrict_name(ProcPtr p, std::string name);
ProcPtr sum(ProcPtr l, ProcPtr r);
ProcPtr par(ProcPtr l, ProcPtr r);

bool equal(const ProcPtr& x, const ProcPtr& y);

const std::vector<Key>& keys(const ProcPtr& p);
bool has_key(const ProcPtr& p, Key k);
bool is_standard(const ProcPtr& p);
Key min_fresh_key(const ProcPtr& p);

// Erases all keys, giving the standard process the term originates from.
ProcPtr origin(const ProcPtr& p);

// Structural sanity of keyed terms: standard prefixes guard standard
// continuations, at most one side of a sum carries keys, and every key
// occurs once, or twice on complementary actions in distinct parallel
// components. Necessary for reachability but not sufficient: (a[0])\a
// passes yet no backward path leads to a standard term.
bool well_formed(const ProcPtr& p);

ProcPtr parse_process(const std::string& text);
std::string render(const ProcPtr& p);

// Structural match ignoring key values but preserving the key-identity
// pattern: returns the bijection keys(pattern) -> keys(target) if the terms
// are equal up to an injective renaming of keys.
std::optional<std::vector<std::pair<Key, Key>>>
match_up_to_keys(const ProcPtr& pattern, const ProcPtr& target);

// ---------------------------------------------------------------------------
// Proof labels

enum class Dir { L, R };
enum class OpKind { Par, Sum };

struct PathElem {
    OpKind op;
    Dir dir;
    bool operator==(const PathElem&) const = default;
    auto operator<=>(const PathElem&) const = default;
};
using OpPath = std::vector<PathElem>;

// A single executed prefix seen through its operator context.
struct SimpleLabel {
    OpPath path;
    Label act;
    Key key = 0;
    bool operator==(const SimpleLabel&) const = default;
    auto operator<=>(const SimpleLabel&) const = default;
};

// A synchronisation: two complementary prefixes sharing one key. The outer
// path leads to the parallel operator where the pairing happened; the halves
// carry their own paths inside the respective components.
struct SyncLabel {
    OpPath path;
    SimpleLabel left, right;  // inner paths; right.act == left.act.complement()
    bool operator==(const SyncLabel&) const = default;
    auto operator<=>(const SyncLabel&) const = default;
};

using ProofLabel = std::variant<SimpleLabel, SyncLabel>;

Label action_of(const ProofLabel& t);  // tau for synchronisations
Key key_of(const ProofLabel& t);
bool is_sync(const ProofLabel& t);
bool is_bare_prefix(const ProofLabel& t);  // simple label with empty path

std::string to_string(const ProofLabel& t);
// Accepts the to_string surface syntax, e.g. "|L +R b[1]" or "+L <a[0], 'a[0]>".
ProofLabel parse_proof_label(const std::string& text);

// Reconstructs the proof label of the unique executed event carrying key k in
// p: a simple label for a lone occurrence, a synchronisation for a
// complementary pair. Throws domain_error when k is absent or occurs in a
// malformed pattern (same component, non-complementary actions, >2 uses).
ProofLabel event_label_of_key(const ProcPtr& p, Key k);

}  // namespace ccsk

#endif
