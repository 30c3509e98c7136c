#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "ccsk/label_relations.hpp"
#include "support/testgen.hpp"

using namespace ccsk;

namespace {

ProofLabel L(const std::string& s) { return parse_proof_label(s); }

// All edge labels of the explored graphs of a few standard processes.
std::vector<ProofLabel> harvest_labels(std::mt19937& rng, int graphs) {
    std::vector<ProofLabel> out;
    for (int i = 0; i < graphs; ++i) {
        auto g = testgen::corpus_graph(rng, 6, 2, 1500);
        for (const auto& e : g.edges) out.push_back(e.label);
    }
    return out;
}

}  // namespace

TEST_CASE("the three relation facts of the running example") {
    CHECK(connected_labels(L("|R +L 'a[0]"), L("<a[0], +L 'a[0]>")));
    CHECK(dependent_labels(L("|R +L 'a[0]"), L("|R +R b[1]")));
    CHECK(independent_labels(L("|L a[0]"), L("|R +R b[1]")));
    CHECK_FALSE(dependent_labels(L("|L a[0]"), L("|R +R b[1]")));
}

TEST_CASE("bare prefixes connect and depend on everything") {
    CHECK(connected_labels(L("a[0]"), L("|R b[1]")));
    CHECK(dependent_labels(L("a[0]"), L("|R b[1]")));
    CHECK_FALSE(independent_labels(L("a[0]"), L("|R b[1]")));
    CHECK(dependent_labels(L("<a[0], 'a[0]>"), L("b[3]")));

    // Mixed operator heads never connect.
    CHECK_FALSE(connected_labels(L("+L a[0]"), L("|R b[1]")));
    CHECK_FALSE(dependent_labels(L("+L a[0]"), L("|R b[1]")));
    CHECK_FALSE(independent_labels(L("+L a[0]"), L("|R b[1]")));
}

TEST_CASE("independence needs distinct keys on opposite parallel sides") {
    CHECK(independent_labels(L("|L a[0]"), L("|R 'a[1]")));
    CHECK_FALSE(independent_labels(L("|L a[0]"), L("|R 'a[0]")));
    CHECK(dependent_labels(L("|L a[0]"), L("|R 'a[0]")));
}

TEST_CASE("independence is irreflexive and symmetric, dependence reflexive") {
    std::mt19937 rng(21);
    auto labels = harvest_labels(rng, 8);
    for (const auto& a : labels) {
        CHECK_FALSE(independent_labels(a, a));
        CHECK(dependent_labels(a, a));
        for (const auto& b : labels) {
            CHECK(independent_labels(a, b) == independent_labels(b, a));
            CHECK(dependent_labels(a, b) == dependent_labels(b, a));
            CHECK(connected_labels(a, b) == connected_labels(b, a));
        }
    }
}

TEST_CASE("complementarity on harvested label pairs") {
    std::mt19937 rng(22);
    auto labels = harvest_labels(rng, 10);
    int connected_pairs = 0;
    for (const auto& a : labels)
        for (const auto& b : labels) {
            bool conn = connected_labels(a, b);
            bool dep = dependent_labels(a, b);
            bool ind = independent_labels(a, b);
            if (dep) CHECK(conn);
            if (ind) CHECK(conn);
            if (conn) {
                ++connected_pairs;
                CHECK(dep != ind);
            }
            auto k = classify_labels(a, b);
            CHECK(k != RelationKind::Connected);
            if (!conn) CHECK(k == RelationKind::NotConnected);
        }
    CHECK(connected_pairs > 100);
}

TEST_CASE("transition connectivity goes through the origin") {
    auto p = parse_process("a | ('a + b)");
    auto q = parse_process("a[0] | ('a + b)");
    auto t1 = forward_steps(p)[0];
    auto t2 = forward_steps(q)[0];
    CHECK(connected_transitions(t1, t2));
    CHECK(connected_transitions(t1, t1));

    // Label-level connectivity over-approximates transition connectivity.
    auto ta = forward_steps(parse_process("a"))[0];
    auto tb = forward_steps(parse_process("0 | b"))[0];
    CHECK(connected_labels(ta.label, tb.label));
    CHECK_FALSE(connected_transitions(ta, tb));
    CHECK(trans_relation(ta, tb) == RelationKind::NotConnected);

    // ... and a realising pair exists for those same labels.
    auto r1 = forward_steps(parse_process("a.(0 | b)"))[0];
    auto r2 = forward_steps_with_key(r1.tgt, 1)[0];
    CHECK(to_string(r1.label) == "a[0]");
    CHECK(to_string(r2.label) == "|R b[1]");
    CHECK(connected_transitions(r1, r2));

    auto bad = Transition{parse_process("a[0] + b[0]"),
                          parse_process("a + b"), L("+L a[0]"), false};
    CHECK_THROWS_AS(connected_transitions(t1, bad), domain_error);
}

TEST_CASE("independent labels on causally ordered transitions") {
    auto start = parse_process("(a.b | 'b.c) \\ b");
    auto t_a = forward_steps(start)[0];
    auto mid = parse_process("(a[0].b[1] | 'b[1].c) \\ b");
    auto t_c = forward_steps(mid)[0];
    CHECK(to_string(t_a.label) == "|L a[0]");
    CHECK(to_string(t_c.label) == "|R c[2]");
    CHECK(independent_labels(t_a.label, t_c.label));
    CHECK(trans_relation(t_a, t_c) == RelationKind::Independent);
}

TEST_CASE("key stripping and reattachment") {
    CHECK(to_string(strip_keys(L("|L a[3]"))) == "|L a");
    CHECK(to_string(strip_keys(L("+L <a[4], 'a[4]>"))) == "+L <a, 'a>");
    std::mt19937 rng(23);
    for (const auto& l : harvest_labels(rng, 6)) {
        auto stripped = strip_keys(l);
        CHECK(to_string(attach_key(stripped, key_of(l))) == to_string(l));
    }
}

TEST_CASE("the concurrency relation on keyless labels") {
    auto pa = strip_keys(L("|L a[0]"));
    auto pb = strip_keys(L("|R b[0]"));
    CHECK(smile(pa, pb));
    CHECK(smile(pb, pa));
    CHECK_FALSE(smile(pa, pa));
    CHECK_FALSE(smile(strip_keys(L("+L a[0]")), strip_keys(L("+R b[0]"))));

    // Conservativity: smile agrees with independence at distinct keys.
    std::mt19937 rng(24);
    auto labels = harvest_labels(rng, 8);
    for (const auto& a : labels)
        for (const auto& b : labels) {
            auto sa = strip_keys(a);
            auto sb = strip_keys(b);
            bool sm = smile(sa, sb);
            CHECK(sm == independent_labels(attach_key(sa, 0), attach_key(sb, 1)));
            CHECK(sm == independent_labels(attach_key(sa, 5), attach_key(sb, 2)));
        }
}

TEST_CASE("pruning executed structure") {
    CHECK(render(prune(parse_process("a[4].(0 | b)"))) == "0 | b");
    CHECK(render(prune(parse_process("a.b + c"))) == "a.b + c");
    CHECK(render(prune(parse_process("(a[0].b) + c"))) == "b");
    CHECK(render(prune(parse_process("a[0] | ('a[0] + b)"))) == "0 | 0");
}

TEST_CASE("splicing out a key") {
    CHECK(render(remove_key(parse_process("a[7].b"), Label::act("a"), 7)) ==
          "b");
    auto p = parse_process("a.b + c");
    CHECK(equal(remove_key(p, Label::act("a"), 3), p));
    // Both polarities go.
    CHECK(render(remove_key(parse_process("a[1].b | 'a[1].c"), Label::act("a"),
                            1)) == "b | c");

    // Removing an unrelated key preserves derivability of a fixed label.
    std::mt19937 rng(25);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 60; ++i) {
        auto x = testgen::random_reachable(rng, 6, 5);
        if (keys(x).empty()) continue;
        for (Key k : keys(x)) {
            auto lbl = event_label_of_key(x, k);
            if (is_sync(lbl)) continue;
            auto act = action_of(lbl);
            auto trimmed = remove_key(x, act.bar ? act.complement() : act, k);
            if (has_key(trimmed, k)) continue;
            Key fresh = std::max(min_fresh_key(x), min_fresh_key(trimmed));
            auto before = forward_steps_with_key(x, fresh);
            auto after = forward_steps_with_key(trimmed, fresh);
            for (const auto& t : before) {
                if (key_of(t.label) == k) continue;
                bool found = std::any_of(
                    after.begin(), after.end(), [&](const Transition& u) {
                        return to_string(u.label) == to_string(t.label);
                    });
                CHECK_MESSAGE(found, render(x), " label ",
                              to_string(t.label), " lost after removing key ",
                              k);
                ++checked;
            }
        }
    }
    CHECK(checked >= 60);
}

TEST_CASE("keyless proved steps") {
    auto steps = ccsp_steps(parse_process("a + b"));
    REQUIRE(steps.size() == 2);
    std::set<std::string> seen;
    for (const auto& s : steps) {
        seen.insert(to_string(s.label) + " -> " + render(s.tgt));
        CHECK(render(s.tgt) == "0");
    }
    CHECK(seen == std::set<std::string>{"+L a -> 0", "+R b -> 0"});

    CHECK(ccsp_steps(parse_process("0")).empty());
    CHECK_THROWS_AS(ccsp_steps(parse_process("a[0]")), domain_error);
}

TEST_CASE("key forgetting and enrichment on standard sources") {
    std::mt19937 rng(26);
    for (int i = 0; i < 100; ++i) {
        auto p = testgen::random_standard(rng, 6, 2);
        auto plain = ccsp_steps(p);
        for (const auto& t : forward_steps(p)) {
            auto kf = key_forget(t);
            bool found = std::any_of(
                plain.begin(), plain.end(), [&](const CcspTransition& u) {
                    return to_string(u.label) == to_string(kf.label) &&
                           equal(u.tgt, kf.tgt);
                });
            CHECK_MESSAGE(found, render(p), " forgot ", to_string(t.label));
            auto again = key_enrich(kf, key_of(t.label));
            CHECK(to_string(again.label) == to_string(t.label));
            CHECK(equal(again.tgt, t.tgt));
        }
        // Every keyless step is the image of a keyed one.
        for (const auto& u : plain) {
            auto keyed = key_enrich(u, 0);
            CHECK(to_string(strip_keys(keyed.label)) == to_string(u.label));
            CHECK(equal(prune(keyed.tgt), u.tgt));
        }
    }
}
