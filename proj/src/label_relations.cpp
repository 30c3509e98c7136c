#include "ccsk/label_relations.hpp"

namespace ccsk {

namespace {

enum class HeadKind { BareSimple, BarePair, Op };

HeadKind head_kind(const ProofLabel& l) {
    if (auto* s = std::get_if<SimpleLabel>(&l))
        return s->path.empty() ? HeadKind::BareSimple : HeadKind::Op;
    return std::get<SyncLabel>(l).path.empty() ? HeadKind::BarePair
                                               : HeadKind::Op;
}

PathElem head_op(const ProofLabel& l) {
    return std::visit([](const auto& s) { return s.path.front(); }, l);
}

ProofLabel strip_head(ProofLabel l) {
    std::visit([](auto& s) { s.path.erase(s.path.begin()); }, l);
    return l;
}

ProofLabel component(const ProofLabel& l, Dir d) {
    const auto& y = std::get<SyncLabel>(l);
    return ProofLabel(d == Dir::L ? y.left : y.right);
}

}  // namespace

bool connected_labels(const ProofLabel& a, const ProofLabel& b) {
    HeadKind ha = head_kind(a), hb = head_kind(b);
    if (ha == HeadKind::BareSimple || hb == HeadKind::BareSimple) return true;
    if (ha == HeadKind::Op && hb == HeadKind::Op) {
        PathElem ea = head_op(a), eb = head_op(b);
        if (ea.op != eb.op) return false;
        if (ea.dir != eb.dir) return true;
        return connected_labels(strip_head(a), strip_head(b));
    }
    if (ha == HeadKind::Op) {
        if (head_op(a).op != OpKind::Par) return false;
        return connected_labels(strip_head(a), component(b, head_op(a).dir));
    }
    if (hb == HeadKind::Op) {
        if (head_op(b).op != OpKind::Par) return false;
        return connected_labels(component(a, head_op(b).dir), strip_head(b));
    }
    return connected_labels(component(a, Dir::L), component(b, Dir::L)) &&
           connected_labels(component(a, Dir::R), component(b, Dir::R));
}

bool dependent_labels(const ProofLabel& a, const ProofLabel& b) {
    HeadKind ha = head_kind(a), hb = head_kind(b);
    if (ha == HeadKind::BareSimple || hb == HeadKind::BareSimple) return true;
    if (ha == HeadKind::Op && hb == HeadKind::Op) {
        PathElem ea = head_op(a), eb = head_op(b);
        if (ea.op != eb.op) return false;
        if (ea.dir == eb.dir) return dependent_labels(strip_head(a), strip_head(b));
        if (ea.op == OpKind::Sum) return true;
        return key_of(a) == key_of(b);
    }
    if (ha == HeadKind::Op) {
        if (head_op(a).op != OpKind::Par) return false;
        return dependent_labels(strip_head(a), component(b, head_op(a).dir));
    }
    if (hb == HeadKind::Op) {
        if (head_op(b).op != OpKind::Par) return false;
        return dependent_labels(component(a, head_op(b).dir), strip_head(b));
    }
    ProofLabel al = component(a, Dir::L), ar = component(a, Dir::R);
    ProofLabel bl = component(b, Dir::L), br = component(b, Dir::R);
    return (dependent_labels(al, bl) && connected_labels(ar, br)) ||
           (dependent_labels(ar, br) && connected_labels(al, bl));
}

bool independent_labels(const ProofLabel& a, const ProofLabel& b) {
    HeadKind ha = head_kind(a), hb = head_kind(b);
    if (ha == HeadKind::BareSimple || hb == HeadKind::BareSimple) return false;
    if (ha == HeadKind::Op && hb == HeadKind::Op) {
        PathElem ea = head_op(a), eb = head_op(b);
        if (ea.op != eb.op) return false;
        if (ea.dir == eb.dir)
            return independent_labels(strip_head(a), strip_head(b));
        if (ea.op == OpKind::Sum) return false;
        return key_of(a) != key_of(b);
    }
    if (ha == HeadKind::Op) {
        if (head_op(a).op != OpKind::Par) return false;
        return independent_labels(strip_head(a), component(b, head_op(a).dir));
    }
    if (hb == HeadKind::Op) {
        if (head_op(b).op != OpKind::Par) return false;
        return independent_labels(component(a, head_op(b).dir), strip_head(b));
    }
    return independent_labels(component(a, Dir::L), component(b, Dir::L)) &&
           independent_labels(component(a, Dir::R), component(b, Dir::R));
}

RelationKind classify_labels(const ProofLabel& a, const ProofLabel& b) {
    bool dep = dependent_labels(a, b), ind = independent_labels(a, b);
    if (!connected_labels(a, b))
        return (dep || ind) ? RelationKind::Connected
                            : RelationKind::NotConnected;
    if (dep != ind) return dep ? RelationKind::Dependent : RelationKind::Independent;
    return RelationKind::Connected;  // complementarity breach marker
}

bool connected_transitions(const Transition& a, const Transition& b) {
    for (const ProcPtr& p : {a.src, a.tgt, b.src, b.tgt})
        if (!is_reachable(p))
            throw domain_error("endpoint is not reachable: " + render(p));
    return equal(origin(a.src), origin(b.src));
}

RelationKind trans_relation(const Transition& a, const Transition& b) {
    if (!equal(origin(a.src), origin(b.src))) return RelationKind::NotConnected;
    return classify_labels(a.label, b.label);
}

// ---------------------------------------------------------------------------
// Keyless fragment

KeylessProofLabel strip_keys(const ProofLabel& l) {
    if (auto* s = std::get_if<SimpleLabel>(&l))
        return KeylessSimple{s->path, s->act};
    const auto& y = std::get<SyncLabel>(l);
    return KeylessSync{y.path,
                       {y.left.path, y.left.act},
                       {y.right.path, y.right.act}};
}

ProofLabel attach_key(const KeylessProofLabel& l, Key k) {
    if (auto* s = std::get_if<KeylessSimple>(&l))
        return SimpleLabel{s->path, s->act, k};
    const auto& y = std::get<KeylessSync>(l);
    return SyncLabel{y.path,
                     {y.left.path, y.left.act, k},
                     {y.right.path, y.right.act, k}};
}

std::string to_string(const KeylessProofLabel& l) {
    auto path_str = [](const OpPath& p) {
        std::string out;
        for (auto e : p)
            out += std::string(e.op == OpKind::Par ? "|" : "+") +
                   (e.dir == Dir::L ? "L" : "R") + " ";
        return out;
    };
    if (auto* s = std::get_if<KeylessSimple>(&l))
        return path_str(s->path) + to_string(s->act);
    const auto& y = std::get<KeylessSync>(l);
    return path_str(y.path) + "<" + path_str(y.left.path) +
           to_string(y.left.act) + ", " + path_str(y.right.path) +
           to_string(y.right.act) + ">";
}

namespace {

enum class KHead { BareSimple, BarePair, Op };

KHead khead(const KeylessProofLabel& l) {
    if (auto* s = std::get_if<KeylessSimple>(&l))
        return s->path.empty() ? KHead::BareSimple : KHead::Op;
    return std::get<KeylessSync>(l).path.empty() ? KHead::BarePair : KHead::Op;
}

PathElem khead_op(const KeylessProofLabel& l) {
    return std::visit([](const auto& s) { return s.path.front(); }, l);
}

KeylessProofLabel kstrip(KeylessProofLabel l) {
    std::visit([](auto& s) { s.path.erase(s.path.begin()); }, l);
    return l;
}

KeylessProofLabel kcomponent(const KeylessProofLabel& l, Dir d) {
    const auto& y = std::get<KeylessSync>(l);
    return KeylessProofLabel(d == Dir::L ? y.left : y.right);
}

}  // namespace

bool smile(const KeylessProofLabel& a, const KeylessProofLabel& b) {
    KHead ha = khead(a), hb = khead(b);
    if (ha == KHead::BareSimple || hb == KHead::BareSimple) return false;
    if (ha == KHead::Op && hb == KHead::Op) {
        PathElem ea = khead_op(a), eb = khead_op(b);
        if (ea.op != eb.op) return false;
        if (ea.dir == eb.dir) return smile(kstrip(a), kstrip(b));
        return ea.op == OpKind::Par;
    }
    if (ha == KHead::Op) {
        if (khead_op(a).op != OpKind::Par) return false;
        return smile(kstrip(a), kcomponent(b, khead_op(a).dir));
    }
    if (hb == KHead::Op) {
        if (khead_op(b).op != OpKind::Par) return false;
        return smile(kcomponent(a, khead_op(b).dir), kstrip(b));
    }
    return smile(kcomponent(a, Dir::L), kcomponent(b, Dir::L)) &&
           smile(kcomponent(a, Dir::R), kcomponent(b, Dir::R));
}

ProcPtr prune(const ProcPtr& p) {
    switch (p->kind) {
        case ProcKind::Nil:
            return p;
        case ProcKind::Prefix:
            return prefix(p->act, prune(p->a));
        case ProcKind::KeyedPrefix:
            return prune(p->a);
        case ProcKind::Restrict:
            return restrict_name(prune(p->a), p->res);
        case ProcKind::Par:
            return par(prune(p->a), prune(p->b));
        case ProcKind::Sum: {
            bool sa = is_standard(p->a), sb = is_standard(p->b);
            if (!sa && sb) return prune(p->a);
            if (sa && !sb) return prune(p->b);
            return sum(prune(p->a), prune(p->b));
        }
    }
    return p;
}

ProcPtr remove_key(const ProcPtr& p, const Label& act, Key k) {
    switch (p->kind) {
        case ProcKind::Nil:
            return p;
        case ProcKind::Prefix:
            return prefix(p->act, remove_key(p->a, act, k));
        case ProcKind::KeyedPrefix:
            if (p->key == k && (p->act == act || p->act == act.complement()))
                return remove_key(p->a, act, k);
            return keyed_prefix(p->act, p->key, remove_key(p->a, act, k));
        case ProcKind::Restrict:
            return restrict_name(remove_key(p->a, act, k), p->res);
        case ProcKind::Sum:
            return sum(remove_key(p->a, act, k), remove_key(p->b, act, k));
        case ProcKind::Par:
            return par(remove_key(p->a, act, k), remove_key(p->b, act, k));
    }
    return p;
}

namespace {

KeylessProofLabel kwith_path(PathElem e, KeylessProofLabel l) {
    std::visit([&](auto& s) { s.path.insert(s.path.begin(), e); }, l);
    return l;
}

std::vector<CcspTransition> ccsp_rec(const ProcPtr& p) {
    std::vector<CcspTransition> out;
    switch (p->kind) {
        case ProcKind::Nil:
        case ProcKind::KeyedPrefix:
            break;
        case ProcKind::Prefix:
            out.push_back({p, p->a, KeylessSimple{{}, p->act}});
            break;
        case ProcKind::Restrict:
            for (auto& t : ccsp_rec(p->a)) {
                Label a = std::visit(
                    [](const auto& s) {
                        if constexpr (std::is_same_v<
                                          std::decay_t<decltype(s)>,
                                          KeylessSimple>)
                            return s.act;
                        else
                            return Label::tau();
                    },
                    t.label);
                if (!a.is_tau() && a.name == p->res) continue;
                out.push_back({p, restrict_name(t.tgt, p->res), t.label});
            }
            break;
        case ProcKind::Sum:
            // The untaken branch is discarded.
            for (auto& t : ccsp_rec(p->a))
                out.push_back(
                    {p, t.tgt, kwith_path({OpKind::Sum, Dir::L}, t.label)});
            for (auto& t : ccsp_rec(p->b))
                out.push_back(
                    {p, t.tgt, kwith_path({OpKind::Sum, Dir::R}, t.label)});
            break;
        case ProcKind::Par: {
            auto ls = ccsp_rec(p->a);
            auto rs = ccsp_rec(p->b);
            for (auto& t : ls)
                out.push_back({p, par(t.tgt, p->b),
                               kwith_path({OpKind::Par, Dir::L}, t.label)});
            for (auto& t : rs)
                out.push_back({p, par(p->a, t.tgt),
                               kwith_path({OpKind::Par, Dir::R}, t.label)});
            for (auto& tl : ls) {
                auto* sl = std::get_if<KeylessSimple>(&tl.label);
                if (!sl || sl->act.is_tau()) continue;
                for (auto& tr : rs) {
                    auto* sr = std::get_if<KeylessSimple>(&tr.label);
                    if (!sr || sr->act.is_tau()) continue;
                    if (sl->act.complement() == sr->act)
                        out.push_back({p, par(tl.tgt, tr.tgt),
                                       KeylessSync{{}, *sl, *sr}});
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace

std::vector<CcspTransition> ccsp_steps(const ProcPtr& p) {
    if (!is_standard(p))
        throw domain_error("keyless semantics needs a standard process: " +
                           render(p));
    return ccsp_rec(p);
}

Transition key_enrich(const CcspTransition& t, Key k) {
    for (auto& c : forward_steps_with_key(t.src, k))
        if (strip_keys(c.label) == t.label && equal(prune(c.tgt), t.tgt))
            return c;
    throw domain_error("no keyed counterpart with key " + std::to_string(k) +
                       " from " + render(t.src));
}

CcspTransition key_forget(const Transition& t) {
    return {prune(t.src), prune(t.tgt), strip_keys(t.label)};
}

}  // namespace ccsk
