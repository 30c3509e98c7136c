#include <doctest.h>

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "ccsk/keyorder.hpp"
#include "support/testgen.hpp"

using namespace ccsk;

namespace {

using Pairs = std::vector<std::pair<Key, Key>>;

Pairs sorted(Pairs p) {
    std::sort(p.begin(), p.end());
    return p;
}

}  // namespace

TEST_CASE("base pairs of the key order") {
    CHECK(sorted(ord(parse_process("a[0].b[1]"))) == Pairs{{0, 1}});
    CHECK(ord(parse_process("a.b + c")).empty());
    CHECK(ord(parse_process("a[0] | b[1]")).empty());
    // A keyed prefix sits below every key of its continuation.
    CHECK(sorted(ord(parse_process("a[0].(b[1] | c[2])"))) ==
          Pairs{{0, 1}, {0, 2}});
    // Sync keys order through both components independently.
    CHECK(sorted(ord(parse_process("a[0].b[1] | 'a[0]"))) == Pairs{{0, 1}});
}

TEST_CASE("order membership") {
    auto x = parse_process("a[0].b[1].c");
    CHECK(leq_keys(x, 0, 1));
    CHECK_FALSE(leq_keys(x, 1, 0));
    CHECK(leq_keys(x, 0, 0));
    CHECK(leq_keys(x, 1, 1));
    CHECK_THROWS_AS(leq_keys(x, 0, 9), domain_error);

    auto chain = parse_process("a[0].b[1].c[2]");
    CHECK(leq_keys(chain, 0, 2));  // transitive closure

    auto split = parse_process("a[0] | b[1]");
    CHECK_FALSE(leq_keys(split, 0, 1));
    CHECK_FALSE(leq_keys(split, 1, 0));
}

TEST_CASE("covering pairs and maximal keys") {
    auto chain = parse_process("a[0].b[1].c[2]");
    CHECK(sorted(hasse_pairs(chain)) == Pairs{{0, 1}, {1, 2}});
    CHECK(maximal_keys(chain) == std::vector<Key>{2});

    auto fork = parse_process("a[0].(b[1] | c[2])");
    CHECK(sorted(hasse_pairs(fork)) == Pairs{{0, 1}, {0, 2}});
    CHECK(maximal_keys(fork) == std::vector<Key>({1, 2}));

    CHECK(maximal_keys(parse_process("a[0] | b[1]")) ==
          std::vector<Key>({0, 1}));
    CHECK(maximal_keys(parse_process("a.b")).empty());
    CHECK(hasse_pairs(parse_process("a[3]")).empty());
}

TEST_CASE("the order is a partial order on reachable processes") {
    std::mt19937 rng(31);
    for (int i = 0; i < 150; ++i) {
        auto x = testgen::random_reachable(rng, 6, 6);
        const auto& ks = keys(x);
        for (auto [a, b] : ord(x)) {
            CHECK(has_key(x, a));
            CHECK(has_key(x, b));
        }
        for (Key k1 : ks)
            for (Key k2 : ks) {
                if (leq_keys(x, k1, k2) && leq_keys(x, k2, k1))
                    CHECK(k1 == k2);  // antisymmetry
                for (Key k3 : ks)
                    if (leq_keys(x, k1, k2) && leq_keys(x, k2, k3))
                        CHECK(leq_keys(x, k1, k3));  // transitivity
            }
    }
}

TEST_CASE("maximal events of a node") {
    auto g = explore(parse_process("a.b.c"));
    auto ci = analyze_causality(g);
    int deep = g.node_id(parse_process("a[0].b[1].c"));
    REQUIRE(deep >= 0);
    auto mx = maximal_events(ci, deep);
    REQUIRE(mx.size() == 1);
    CHECK(ci.es.cls_key[static_cast<size_t>(mx[0])] == 1);
    CHECK(maximal_events(ci, g.root).empty());

    auto gp = explore(parse_process("a | b"));
    auto cip = analyze_causality(gp);
    int both = gp.node_id(parse_process("a[0] | b[1]"));
    REQUIRE(both >= 0);
    CHECK(maximal_events(cip, both).size() == 2);
}

TEST_CASE("an event is maximal exactly when its key is") {
    std::mt19937 rng(32);
    for (int i = 0; i < 25; ++i) {
        auto g = testgen::corpus_graph(rng, 6, 2, 1200);
        auto ci = analyze_causality(g);
        for (int n = 0; n < static_cast<int>(g.nodes.size()); ++n) {
            const auto& x = g.nodes[static_cast<size_t>(n)];
            auto mx = maximal_events(ci, n);
            auto mkv = maximal_keys(x);
            std::set<Key> mk(mkv.begin(), mkv.end());
            std::set<Key> got;
            for (int e : mx) got.insert(ci.es.cls_key[static_cast<size_t>(e)]);
            CHECK(got == mk);
        }
    }
}
