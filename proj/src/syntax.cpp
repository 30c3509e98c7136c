#include "ccsk/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ccsk {

// ---------------------------------------------------------------------------
// Labels

std::string to_string(const Label& l) {
    if (l.is_tau()) return "tau";
    return l.bar ? "'" + l.name : l.name;
}

// ---------------------------------------------------------------------------
// Factories

static std::vector<Key> merge_keys(const std::vector<Key>& x, const std::vector<Key>& y) {
    std::vector<Key> out;
    out.reserve(x.size() + y.size());
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ProcPtr nil() {
    static const ProcPtr n = std::make_shared<Proc>();
    return n;
}

ProcPtr prefix(Label l, ProcPtr p) {
    auto n = std::make_shared<Proc>();
    n->kind = ProcKind::Prefix;
    n->act = std::move(l);
    n->a = std::move(p);
    n->keyset = n->a->keyset;
    n->prefix_count = n->a->prefix_count + 1;
    return n;
}

ProcPtr keyed_prefix(Label l, Key k, ProcPtr p) {
    auto n = std::make_shared<Proc>();
    n->kind = ProcKind::KeyedPrefix;
    n->act = std::move(l);
    n->key = k;
    n->a = std::move(p);
    n->keyset = merge_keys(n->a->keyset, {k});
    n->prefix_count = n->a->prefix_count + 1;
    return n;
}

ProcPtr restrict_name(ProcPtr p, std::string name) {
    auto n = std::make_shared<Proc>();
    n->kind = ProcKind::Restrict;
    n->res = std::move(name);
    n->a = std::move(p);
    n->keyset = n->a->keyset;
    n->prefix_count = n->a->prefix_count;
    return n;
}

static ProcPtr binary(ProcKind kind, ProcPtr l, ProcPtr r) {
    auto n = std::make_shared<Proc>();
    n->kind = kind;
    n->a = std::move(l);
    n->b = std::move(r);
    n->keyset = merge_keys(n->a->keyset, n->b->keyset);
    n->prefix_count = n->a->prefix_count + n->b->prefix_count;
    return n;
}

ProcPtr sum(ProcPtr l, ProcPtr r) { return binary(ProcKind::Sum, std::move(l), std::move(r)); }
ProcPtr par(ProcPtr l, ProcPtr r) { return binary(ProcKind::Par, std::move(l), std::move(r)); }

bool equal(const ProcPtr& x, const ProcPtr& y) {
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ProcKind::Nil: return true;
        case ProcKind::Prefix: return x->act == y->act && equal(x->a, y->a);
        case ProcKind::KeyedPrefix:
            return x->act == y->act && x->key == y->key && equal(x->a, y->a);
        case ProcKind::Restrict: return x->res == y->res && equal(x->a, y->a);
        case ProcKind::Sum:
        case ProcKind::Par: return equal(x->a, y->a) && equal(x->b, y->b);
    }
    return false;
}

const std::vector<Key>& keys(const ProcPtr& p) { return p->keyset; }

bool has_key(const ProcPtr& p, Key k) {
    return std::binary_search(p->keyset.begin(), p->keyset.end(), k);
}

bool is_standard(const ProcPtr& p) { return p->keyset.empty(); }

Key min_fresh_key(const ProcPtr& p) {
    Key k = 0;
    for (Key used : p->keyset) {
        if (used == k) ++k;
        else if (used > k) break;
    }
    return k;
}

ProcPtr origin(const ProcPtr& p) {
    switch (p->kind) {
        case ProcKind::Nil: return p;
        case ProcKind::Prefix: {
            auto a = origin(p->a);
            return a == p->a ? p : prefix(p->act, a);
        }
        case ProcKind::KeyedPrefix: return prefix(p->act, origin(p->a));
        case ProcKind::Restrict: {
            auto a = origin(p->a);
            return a == p->a ? p : restrict_name(a, p->res);
        }
        case ProcKind::Sum:
        case ProcKind::Par: {
            auto a = origin(p->a);
            auto b = origin(p->b);
            if (a == p->a && b == p->b) return p;
            return binary(p->kind, a, b);
        }
    }
    return p;
}

namespace {

bool shape_ok(const ProcPtr& p) {
    switch (p->kind) {
        case ProcKind::Nil: return true;
        case ProcKind::Prefix: return is_standard(p->a) && shape_ok(p->a);
        case ProcKind::KeyedPrefix:
        case ProcKind::Restrict: return shape_ok(p->a);
        case ProcKind::Sum:
            if (!is_standard(p->a) && !is_standard(p->b)) return false;
            [[fallthrough]];
        case ProcKind::Par: return shape_ok(p->a) && shape_ok(p->b);
    }
    return true;
}

}  // namespace

bool well_formed(const ProcPtr& p) {
    if (!shape_ok(p)) return false;
    for (Key k : keys(p)) {
        try {
            event_label_of_key(p, k);
        } catch (const domain_error&) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Lexer {
    std::string_view s;
    size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eof() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool consume(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c))
            throw parse_error(std::string("expected '") + c + "' at offset " + std::to_string(i));
    }
    std::string name() {
        skip_ws();
        size_t start = i;
        if (i >= s.size() || !std::islower(static_cast<unsigned char>(s[i])))
            throw parse_error("expected a name at offset " + std::to_string(i));
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        return std::string(s.substr(start, i - start));
    }
    Key nat() {
        skip_ws();
        size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (start == i) throw parse_error("expected a key at offset " + std::to_string(i));
        return static_cast<Key>(std::stoul(std::string(s.substr(start, i - start))));
    }
};

struct ProcParser {
    Lexer lx;

    ProcPtr parse() {
        auto p = proc();
        if (!lx.eof())
            throw parse_error("trailing input at offset " + std::to_string(lx.i));
        return p;
    }

    ProcPtr proc() {
        auto l = par_level();
        while (lx.consume('+')) l = sum(l, par_level());
        return l;
    }

    ProcPtr par_level() {
        auto l = pre_level();
        while (lx.consume('|')) l = par(l, pre_level());
        return l;
    }

    bool at_label() {
        char c = lx.peek();
        return c == '\'' || std::islower(static_cast<unsigned char>(c));
    }

    Label label() {
        if (lx.consume('\'')) return Label::act(lx.name(), true);
        std::string n = lx.name();
        if (n == "tau") return Label::tau();
        return Label::act(n, false);
    }

    ProcPtr pre_level() {
        if (!at_label()) return atom();
        Label l = label();
        std::optional<Key> k;
        if (lx.consume('[')) {
            k = lx.nat();
            lx.expect(']');
        }
        if (lx.consume('.')) {
            ProcPtr cont = pre_level();
            return k ? keyed_prefix(l, *k, cont) : prefix(l, cont);
        }
        ProcPtr p = k ? keyed_prefix(l, *k, nil()) : prefix(l, nil());
        while (lx.consume('\\')) p = restrict_name(p, lx.name());
        return p;
    }

    ProcPtr atom() {
        ProcPtr p;
        if (lx.consume('0')) {
            p = nil();
        } else if (lx.consume('(')) {
            p = proc();
            lx.expect(')');
        } else {
            throw parse_error("expected a process at offset " + std::to_string(lx.i));
        }
        while (lx.consume('\\')) p = restrict_name(p, lx.name());
        return p;
    }
};

}  // namespace

ProcPtr parse_process(const std::string& text) {
    ProcParser p{Lexer{text}};
    return p.parse();
}

// ---------------------------------------------------------------------------
// Renderer: minimal parentheses, round-trips through parse_process.

namespace {

// Precedence levels: sum < par < pre < atom.
enum Level { LvSum = 0, LvPar = 1, LvPre = 2, LvAtom = 3 };

void render_rec(const ProcPtr& p, Level ctx, std::string& out) {
    auto wrap = [&](Level mine, auto&& body) {
        bool parens = mine < ctx;
        if (parens) out += '(';
        body();
        if (parens) out += ')';
    };
    switch (p->kind) {
        case ProcKind::Nil:
            out += '0';
            break;
        case ProcKind::Prefix:
        case ProcKind::KeyedPrefix:
            wrap(LvPre, [&] {
                out += to_string(p->act);
                if (p->kind == ProcKind::KeyedPrefix) {
                    out += '[';
                    out += std::to_string(p->key);
                    out += ']';
                }
                if (p->a->kind != ProcKind::Nil) {
                    out += '.';
                    render_rec(p->a, LvPre, out);
                }
            });
            break;
        case ProcKind::Restrict:
            // Restriction operand must be an atom; everything else is wrapped.
            if (p->a->kind == ProcKind::Nil || p->a->kind == ProcKind::Restrict) {
                render_rec(p->a, LvAtom, out);
            } else {
                out += '(';
                render_rec(p->a, LvSum, out);
                out += ')';
            }
            out += '\\';
            out += p->res;
            break;
        case ProcKind::Sum:
            wrap(LvSum, [&] {
                render_rec(p->a, LvSum, out);  // left-associative chain
                out += " + ";
                render_rec(p->b, LvPar, out);
            });
            break;
        case ProcKind::Par:
            wrap(LvPar, [&] {
                render_rec(p->a, LvPar, out);
                out += " | ";
                render_rec(p->b, LvPre, out);
            });
            break;
    }
}

}  // namespace

std::string render(const ProcPtr& p) {
    std::string out;
    render_rec(p, LvSum, out);
    return out;
}

// ---------------------------------------------------------------------------
// Key-pattern matching

namespace {

bool match_keys_rec(const ProcPtr& x, const ProcPtr& y,
                    std::vector<std::pair<Key, Key>>& fwd) {
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case ProcKind::Nil: return true;
        case ProcKind::Prefix:
            return x->act == y->act && match_keys_rec(x->a, y->a, fwd);
        case ProcKind::KeyedPrefix: {
            if (x->act != y->act) return false;
            for (auto& [from, to] : fwd) {
                if (from == x->key) {
                    if (to != y->key) return false;
                    return match_keys_rec(x->a, y->a, fwd);
                }
                if (to == y->key) return false;  // injectivity
            }
            fwd.emplace_back(x->key, y->key);
            return match_keys_rec(x->a, y->a, fwd);
        }
        case ProcKind::Restrict:
            return x->res == y->res && match_keys_rec(x->a, y->a, fwd);
        case ProcKind::Sum:
        case ProcKind::Par:
            return match_keys_rec(x->a, y->a, fwd) && match_keys_rec(x->b, y->b, fwd);
    }
    return false;
}

}  // namespace

std::optional<std::vector<std::pair<Key, Key>>>
match_up_to_keys(const ProcPtr& pattern, const ProcPtr& target) {
    std::vector<std::pair<Key, Key>> fwd;
    if (match_keys_rec(pattern, target, fwd)) return fwd;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Proof labels

Label action_of(const ProofLabel& t) {
    if (auto* s = std::get_if<SimpleLabel>(&t)) return s->act;
    return Label::tau();
}

Key key_of(const ProofLabel& t) {
    if (auto* s = std::get_if<SimpleLabel>(&t)) return s->key;
    return std::get<SyncLabel>(t).left.key;
}

bool is_sync(const ProofLabel& t) { return std::holds_alternative<SyncLabel>(t); }

bool is_bare_prefix(const ProofLabel& t) {
    auto* s = std::get_if<SimpleLabel>(&t);
    return s && s->path.empty();
}

namespace {

void render_path(const OpPath& path, std::string& out) {
    for (const auto& e : path) {
        out += e.op == OpKind::Par ? '|' : '+';
        out += e.dir == Dir::L ? 'L' : 'R';
        out += ' ';
    }
}

void render_simple(const SimpleLabel& s, std::string& out) {
    render_path(s.path, out);
    out += to_string(s.act);
    out += '[';
    out += std::to_string(s.key);
    out += ']';
}

}  // namespace

std::string to_string(const ProofLabel& t) {
    std::string out;
    if (auto* s = std::get_if<SimpleLabel>(&t)) {
        render_simple(*s, out);
    } else {
        const auto& y = std::get<SyncLabel>(t);
        render_path(y.path, out);
        out += '<';
        render_simple(y.left, out);
        out += ", ";
        render_simple(y.right, out);
        out += '>';
    }
    return out;
}

namespace {

struct LabelParser {
    Lexer lx;

    OpPath path() {
        OpPath out;
        for (;;) {
            char c = lx.peek();
            if (c != '|' && c != '+') return out;
            lx.consume(c);
            OpKind op = c == '|' ? OpKind::Par : OpKind::Sum;
            char d = lx.peek();
            if (d != 'L' && d != 'R')
                throw parse_error("expected L or R after operator at offset " +
                                  std::to_string(lx.i));
            lx.consume(d);
            out.push_back({op, d == 'L' ? Dir::L : Dir::R});
        }
    }

    SimpleLabel simple() {
        SimpleLabel s;
        s.path = path();
        s.act = action();
        lx.expect('[');
        s.key = lx.nat();
        lx.expect(']');
        return s;
    }

    Label action() {
        if (lx.consume('\'')) return Label::act(lx.name(), true);
        std::string n = lx.name();
        if (n == "tau") return Label::tau();
        return Label::act(n, false);
    }

    ProofLabel parse() {
        OpPath p = path();
        ProofLabel out;
        if (lx.peek() == '<') {
            lx.expect('<');
            SyncLabel y;
            y.path = std::move(p);
            y.left = simple();
            lx.expect(',');
            y.right = simple();
            lx.expect('>');
            if (y.left.act.is_tau() || y.right.act != y.left.act.complement())
                throw parse_error("synchronisation halves must carry complementary actions");
            if (y.left.key != y.right.key)
                throw parse_error("synchronisation halves must share one key");
            out = std::move(y);
        } else {
            SimpleLabel s;
            s.path = std::move(p);
            s.act = action();
            lx.expect('[');
            s.key = lx.nat();
            lx.expect(']');
            out = std::move(s);
        }
        if (!lx.eof())
            throw parse_error("trailing input at offset " + std::to_string(lx.i));
        return out;
    }
};

}  // namespace

ProofLabel parse_proof_label(const std::string& text) {
    LabelParser p{Lexer{text}};
    return p.parse();
}

// ---------------------------------------------------------------------------
// event_label_of_key

namespace {

struct KeyOccurrence {
    OpPath path;
    Label act;
};

void find_key(const ProcPtr& p, Key k, OpPath& here, std::vector<KeyOccurrence>& out) {
    switch (p->kind) {
        case ProcKind::Nil: return;
        case ProcKind::Prefix: find_key(p->a, k, here, out); return;
        case ProcKind::KeyedPrefix:
            if (p->key == k) out.push_back({here, p->act});
            find_key(p->a, k, here, out);
            return;
        case ProcKind::Restrict: find_key(p->a, k, here, out); return;
        case ProcKind::Sum:
        case ProcKind::Par: {
            OpKind op = p->kind == ProcKind::Par ? OpKind::Par : OpKind::Sum;
            if (has_key(p->a, k)) {
                here.push_back({op, Dir::L});
                find_key(p->a, k, here, out);
                here.pop_back();
            }
            if (has_key(p->b, k)) {
                here.push_back({op, Dir::R});
                find_key(p->b, k, here, out);
                here.pop_back();
            }
            return;
        }
    }
}

}  // namespace

ProofLabel event_label_of_key(const ProcPtr& p, Key k) {
    std::vector<KeyOccurrence> occ;
    OpPath scratch;
    find_key(p, k, scratch, occ);
    if (occ.empty())
        throw domain_error("key " + std::to_string(k) + " does not occur in " + render(p));
    if (occ.size() == 1) return SimpleLabel{occ[0].path, occ[0].act, k};
    if (occ.size() > 2)
        throw domain_error("key " + std::to_string(k) + " occurs more than twice in " + render(p));

    const OpPath& pa = occ[0].path;
    const OpPath& pb = occ[1].path;
    size_t split = 0;
    while (split < pa.size() && split < pb.size() && pa[split] == pb[split]) ++split;
    bool diverge_ok = split < pa.size() && split < pb.size() &&
                      pa[split].op == OpKind::Par && pb[split].op == OpKind::Par &&
                      pa[split].dir != pb[split].dir;
    if (!diverge_ok)
        throw domain_error("key " + std::to_string(k) +
                           " occurs twice outside a parallel pairing in " + render(p));
    if (occ[0].act.is_tau() || occ[1].act != occ[0].act.complement())
        throw domain_error("key " + std::to_string(k) +
                           " pairs non-complementary actions in " + render(p));

    const KeyOccurrence& l = pa[split].dir == Dir::L ? occ[0] : occ[1];
    const KeyOccurrence& r = pa[split].dir == Dir::L ? occ[1] : occ[0];
    SyncLabel y;
    y.path.assign(pa.begin(), pa.begin() + split);
    y.left = SimpleLabel{OpPath(l.path.begin() + split + 1, l.path.end()), l.act, k};
    y.right = SimpleLabel{OpPath(r.path.begin() + split + 1, r.path.end()), r.act, k};
    return y;
}

}  // namespace ccsk
