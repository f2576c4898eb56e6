#include "pebblepath/lovasz.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace pebblepath;
using pebblepath::testing::all_digraphs;
using pebblepath::testing::digraph_classes;

namespace {
    auto ids(const std::vector<PwStructure>& xs)
    {
        std::vector<std::string> out;
        for (auto& x : xs)
            out.push_back(x.id);
        std::sort(out.begin(), out.end());
        return out;
    }

    auto random_target(std::mt19937_64& rng, const Signature& sig, int n)
    {
        Structure s(sig, n);
        std::bernoulli_distribution coin(0.4);
        for (int r = 0; r < sig.size(); ++r) {
            int ar = sig.arity(r);
            std::vector<int> t(ar, 0);
            while (true) {
                if (coin(rng))
                    s.add_tuple(r, t);
                int i = 0;
                while (i < ar && ++t[i] == n)
                    t[i++] = 0;
                if (i == ar)
                    break;
            }
        }
        return s;
    }
}

TEST_CASE("enumeration examples")
{
    auto sig = graphs::edge_signature();
    auto k2 = enumerate_pw_structures(sig, 2, 3);
    auto has = [&](const Structure& s) {
        auto id = structure_id(s);
        return std::any_of(k2.begin(), k2.end(), [&](const PwStructure& p) { return p.id == id; });
    };
    for (int n = 1; n <= 3; ++n) {
        CHECK(has(graphs::path(n)));
        CHECK(has(graphs::edgeless(n)));
    }
    CHECK_FALSE(has(graphs::clique(3)));
    CHECK_FALSE(has(graphs::cycle(3)));

    // width 0: only loops may relate elements
    for (auto& p : enumerate_pw_structures(sig, 1, 3))
        for (auto& t : p.structure.tuples(0))
            CHECK(t[0] == t[1]);

    auto empty = enumerate_pw_structures(sig, 3, 0);
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].structure.size() == 0);

    for (auto& p : k2) {
        auto check = validate_pd(p.structure, p.pd);
        CHECK(check);
        CHECK(check.width < 2);
    }
}

TEST_CASE("bag-by-bag generation matches the pathwidth filter")
{
    auto sig = graphs::edge_signature();
    for (int k = 1; k <= 3; ++k)
        for (int n = 0; n <= 3; ++n)
            CHECK(ids(enumerate_pw_structures(sig, k, n)) == ids(enumerate_pw_structures_by_filter(sig, k, n)));
    CHECK(ids(enumerate_pw_structures(sig, 2, 4)) == ids(enumerate_pw_structures_by_filter(sig, 2, 4, 100'000)));

    Signature mixed{ { "E", 2 }, { "P", 1 }, { "Q", 0 } };
    CHECK(ids(enumerate_pw_structures(mixed, 2, 3)) == ids(enumerate_pw_structures_by_filter(mixed, 2, 3)));

    Signature ternary{ { "T", 3 } };
    CHECK(ids(enumerate_pw_structures(ternary, 2, 2)) == ids(enumerate_pw_structures_by_filter(ternary, 2, 2)));
}

TEST_CASE("class counts are frozen")
{
    // digraphs with loops up to isomorphism: 1, 2, 10, 104 on 0..3 vertices
    auto sig = graphs::edge_signature();
    CHECK(enumerate_pw_structures(sig, 3, 3).size() == 1 + 2 + 10 + 104);
    CHECK(digraph_classes(3).size() == 2 + 10 + 104);
}

TEST_CASE("homomorphism counting examples")
{
    auto k3 = graphs::clique(3), k2 = graphs::clique(2);
    auto edge = graphs::directed(2, { { 0, 1 } });
    CHECK(hom_count_pd(edge, { { { 0, 1 } } }, k3) == 6);
    CHECK(hom_count_pd(graphs::path(3), { { { 0, 1 }, { 1, 2 } } }, k2) == 2);
    CHECK(hom_count_pd(graphs::edgeless(0), {}, k3) == 1);
    CHECK(hom_count_pd(graphs::edgeless(2), { { { 0 }, { 1 } } }, graphs::edgeless(0)) == 0);

    CHECK_THROWS_AS(hom_count_pd(edge, { { { 0 }, { 1 } } }, k3), DecompositionError);
    CHECK_THROWS_AS(hom_count_pd(graphs::path(3), { { { 0, 1 }, { 2 }, { 1, 2 } } }, k3), DecompositionError);
}

TEST_CASE("dynamic programme agrees with brute force")
{
    std::mt19937_64 rng(17);
    Signature mixed{ { "E", 2 }, { "P", 1 }, { "Q", 0 } };
    for (auto& sig : { graphs::edge_signature(), mixed }) {
        std::vector<Structure> targets{ Structure(sig, 0) };
        for (int n = 1; n <= 5; ++n)
            for (int i = 0; i < 3; ++i)
                targets.push_back(random_target(rng, sig, n));
        for (auto& c : enumerate_pw_structures(sig, 2, sig.size() > 1 ? 3 : 4))
            for (auto& a : targets)
                REQUIRE(hom_count_pd(c.structure, c.pd, a) == count_homs_bruteforce(c.structure, a));
    }
    // decompositions found by the exact pathwidth search work as well
    for (auto& c : digraph_classes(3)) {
        auto pd = pathwidth_exact(c).certificate;
        for (auto& a : digraph_classes(2))
            REQUIRE(hom_count_pd(c, pd, a) == count_homs_bruteforce(c, a));
    }
}

TEST_CASE("Lovasz equivalence examples")
{
    auto k3 = graphs::clique(3), k2 = graphs::clique(2);
    auto v = lovasz_equiv(k3, k2, 2, 3);
    CHECK_FALSE(v.equivalent);
    REQUIRE(v.distinguishing);
    // the one-element structure comes first and already tells them apart
    CHECK(v.distinguishing->structure.size() == 1);
    CHECK(v.count_a == 3);
    CHECK(v.count_b == 2);
    auto edge = structure_id(graphs::directed(2, { { 0, 1 } }));
    auto it = std::find_if(v.entries.begin(), v.entries.end(), [&](const HomVectorEntry& e) { return e.id == edge; });
    REQUIRE(it != v.entries.end());
    CHECK(it->in_a == 6);
    CHECK(it->in_b == 2);

    CHECK(lovasz_equiv(k3, k3, 2, 3).equivalent);
    CHECK(lovasz_equiv(graphs::path(3), graphs::directed(3, { { 2, 1 }, { 1, 2 }, { 0, 1 }, { 1, 0 } }), 2, 4).equivalent);

    auto text = format_hom_vectors(v);
    CHECK(text.find(edge + "\t6\t2\n") != std::string::npos);
}

TEST_CASE("Lovasz equivalence properties")
{
    auto cls = digraph_classes(3);
    for (std::size_t i = 0; i < cls.size(); i += 7)
        for (std::size_t j = 0; j < cls.size(); j += 5) {
            auto ab = lovasz_equiv(cls[i], cls[j], 2, 3);
            auto ba = lovasz_equiv(cls[j], cls[i], 2, 3);
            REQUIRE(ab.equivalent == ba.equivalent);
            if (i == j)
                REQUIRE(ab.equivalent);
            if (! ab.equivalent)
                REQUIRE(ab.distinguishing->id == ba.distinguishing->id);
        }
    // isomorphic copies of a test structure give the same counts
    auto targets = digraph_classes(2);
    auto tests = enumerate_pw_structures(graphs::edge_signature(), 2, 3);
    for (auto& c : all_digraphs(3)) {
        auto pw = pathwidth_exact(c);
        if (pw.width >= 2)
            continue;
        auto id = structure_id(c);
        auto rep = std::find_if(tests.begin(), tests.end(), [&](const PwStructure& p) { return p.id == id; });
        REQUIRE(rep != tests.end());
        for (auto& a : targets)
            REQUIRE(hom_count_pd(c, pw.certificate, a) == hom_count_pd(rep->structure, rep->pd, a));
    }
}
