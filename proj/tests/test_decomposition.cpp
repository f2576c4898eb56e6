#include "pebblepath/decomposition.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>
#include <set>

using namespace pebblepath;
using pebblepath::testing::all_digraphs;
using pebblepath::testing::digraph_classes;

namespace {
    // Undirected graphs on n vertices, one per isomorphism class.
    auto graph_classes(int n)
    {
        std::vector<std::pair<int, int>> slots;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                slots.emplace_back(i, j);
        std::set<std::vector<std::vector<Tuple>>> seen;
        std::vector<Structure> out;
        for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
            std::vector<std::pair<int, int>> edges;
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (mask >> s & 1)
                    edges.push_back(slots[s]);
            auto g = graphs::undirected(n, edges);
            if (seen.insert(canonical_form(g)).second)
                out.push_back(g);
        }
        return out;
    }

    // Least width over all layouts, straight from the definition.
    auto pathwidth_by_layouts(const Structure& a) -> int
    {
        auto g = gaifman(a);
        std::vector<int> order(a.size());
        std::iota(order.begin(), order.end(), 0);
        int best = a.size();
        do {
            int worst = 0;
            for (int i = 0; i < a.size(); ++i) {
                int active = 0;
                // the bag at i: order[i] and earlier elements adjacent to
                // something at i or later
                for (int j = 0; j <= i; ++j) {
                    bool later = j == i;
                    for (int l = i; l < a.size() && ! later; ++l)
                        later = g.adjacent(order[j], order[l]);
                    active += later;
                }
                worst = std::max(worst, active - 1);
            }
            best = std::min(best, worst);
        } while (std::next_permutation(order.begin(), order.end()));
        return a.size() == 0 ? 0 : best;
    }
}

TEST_CASE("decomposition validation")
{
    auto p3 = graphs::path(3);
    auto ok = validate_pd(p3, { { { 0, 1 }, { 1, 2 } } });
    CHECK(ok);
    CHECK(ok.width == 1);

    auto split = validate_pd(graphs::edgeless(2), { { { 0 }, { 1 }, { 0 } } });
    REQUIRE_FALSE(split);
    CHECK(split.violation->clause == "PD3");
    CHECK(validate_pd(p3, { { { 0, 1 }, { 2 } } }).violation->clause == "PD2");
    CHECK(validate_pd(p3, { { { 0, 1 } } }).violation->clause == "PD1");

    Coalgebra singletons{ 1, {} };
    for (int x = 0; x < 3; ++x)
        singletons.alpha.push_back({ { { 1, x } }, 1 });
    CHECK_FALSE(validate_coalgebra(graphs::edgeless(3), singletons));

    LinearForestCover bad{ { { 0, 1, 2 } }, { 1, 2, 1 } };
    CHECK_FALSE(validate_cover(p3, bad, 2));
    LinearForestCover clash{ { { 0, 1, 2 } }, { 1, 1, 2 } };
    CHECK(validate_cover(p3, clash, 2)->clause == "FC2");
    LinearForestCover apart{ { { 0, 1 }, { 2 } }, { 1, 2, 1 } };
    CHECK(validate_cover(p3, apart, 2)->clause == "FC1");
}

TEST_CASE("section families")
{
    auto one = build_section_family(graphs::clique(2), { { { 0, 1 } } }, 2);
    CHECK(one == SectionFamily{ { { 0, 1 }, { 1, 2 } } });
    auto two = build_section_family(graphs::path(3), { { { 0, 1 }, { 1, 2 } } }, 2);
    REQUIRE(two.size() == 2);
    CHECK(two[1].at(1) == two[0].at(1));
    CHECK(two[1].at(2) != two[1].at(1));
    CHECK(build_section_family(graphs::edgeless(0), {}, 1).empty());
    CHECK_THROWS_AS(build_section_family(graphs::clique(3), { { { 0, 1, 2 } } }, 2), DecompositionError);

    // agreement on every pair of bags, not just neighbours
    for (auto& g : graph_classes(5)) {
        auto pw = pathwidth_exact(g);
        auto family = build_section_family(g, pw.certificate, pw.width + 1);
        for (std::size_t x = 0; x < family.size(); ++x) {
            std::set<int> used;
            for (auto [e, p] : family[x]) {
                REQUIRE(used.insert(p).second);
                REQUIRE(p >= 1);
                REQUIRE(p <= pw.width + 1);
            }
            for (std::size_t y = 0; y < family.size(); ++y)
                for (auto [e, p] : family[x])
                    if (family[y].count(e))
                        REQUIRE(family[y].at(e) == p);
        }
    }
}

TEST_CASE("conversion examples")
{
    auto p3 = graphs::path(3);
    auto cover = pd_to_cover(p3, { { { 0, 1 }, { 1, 2 } } }, 2);
    CHECK(cover.chains == std::vector<std::vector<int>>{ { 0, 1, 2 } });
    CHECK(cover.pebbling == std::vector<int>{ 1, 2, 1 });
    CHECK(cover_to_pd(p3, cover) == PathDecomposition{ { { 0 }, { 0, 1 }, { 1, 2 } } });
    CHECK(validate_pd(p3, cover_to_pd(p3, cover)).width == 1);

    auto two_edges = graphs::undirected(4, { { 0, 1 }, { 2, 3 } });
    CHECK(pd_to_cover(two_edges, { { { 0, 1 }, { 2, 3 } } }, 2).chains.size() == 2);
    auto discrete = pd_to_cover(graphs::edgeless(3), { { { 0 }, { 1 }, { 2 } } }, 1);
    CHECK(discrete.chains == std::vector<std::vector<int>>{ { 0 }, { 1 }, { 2 } });
    CHECK(cover_to_pd(graphs::edgeless(1), { { { 0 } }, { 1 } }) == PathDecomposition{ { { 0 } } });

    auto k2 = graphs::clique(2);
    LinearForestCover pair{ { { 0, 1 } }, { 1, 2 } };
    auto alpha = cover_to_coalgebra(k2, pair, 2);
    Play t{ { 1, 0 }, { 2, 1 } };
    CHECK(alpha.alpha == std::vector<IndexedPlay>{ { t, 1 }, { t, 2 } });
    CHECK(coalgebra_to_cover(k2, alpha) == pair);
    CHECK(cover_to_coalgebra(graphs::edgeless(0), { {}, {} }, 1).alpha.empty());
}

TEST_CASE("round trips on all small graphs")
{
    for (int n = 0; n <= 5; ++n)
        for (auto& g : graph_classes(n)) {
            auto pw = pathwidth_exact(g);
            REQUIRE(validate_pd(g, pw.certificate));
            REQUIRE(validate_pd(g, pw.certificate).width == pw.width);
            for (int k = pw.width + 1; k <= pw.width + 2; ++k) {
                auto cover = pd_to_cover(g, pw.certificate, k);
                REQUIRE_FALSE(validate_cover(g, cover, k));
                auto back = cover_to_pd(g, cover);
                REQUIRE(validate_pd(g, back));
                REQUIRE(validate_pd(g, back).width < k);

                auto canon = canonicalize_cover(cover);
                auto alpha = cover_to_coalgebra(g, canon, k);
                REQUIRE_FALSE(validate_coalgebra(g, alpha));
                REQUIRE(coalgebra_to_cover(g, alpha) == canon);
            }
        }
}

TEST_CASE("pathwidth and coalgebra number")
{
    CHECK(pathwidth_exact(graphs::edgeless(1)).width == 0);
    CHECK(pathwidth_exact(graphs::path(4)).width == 1);
    CHECK(pathwidth_exact(graphs::clique(4)).width == 3);
    CHECK(pathwidth_exact(graphs::cycle(4)).width == 2);
    CHECK(coalgebra_number(graphs::clique(4)).k == 4);
    CHECK(coalgebra_number(graphs::edgeless(0)).k == 1);

    for (int n = 1; n <= 5; ++n)
        for (auto& g : graph_classes(n)) {
            int pw = pathwidth_exact(g).width;
            REQUIRE(pw == pathwidth_by_layouts(g));
            auto kappa = coalgebra_number(g);
            REQUIRE(kappa.k == pw + 1);
            REQUIRE_FALSE(validate_coalgebra(g, kappa.witness));
            REQUIRE_FALSE(find_cover(g, pw));
            // a cover at k survives with more pebbles available
            auto cover = find_cover(g, pw + 1);
            REQUIRE(cover);
            REQUIRE_FALSE(validate_cover(g, *cover, pw + 2));
        }
    // directed structures and loops go through the Gaifman graph
    for (auto& g : digraph_classes(3))
        REQUIRE(pathwidth_exact(g).width == pathwidth_by_layouts(g));
}

TEST_CASE("cover morphisms")
{
    auto p3 = graphs::path(3);
    LinearForestCover c{ { { 0, 1, 2 } }, { 1, 2, 1 } };
    CHECK(is_cover_morphism(p3, c, p3, c, { 0, 1, 2 }));
    CHECK_FALSE(is_cover_morphism(p3, c, p3, c, { 2, 1, 0 }));
}

TEST_CASE("text forms")
{
    auto p3 = graphs::path(3);
    PathDecomposition pd{ { { 0, 1 }, { 1, 2 } } };
    CHECK(parse_pd(format_pd(pd, p3), p3) == pd);
    LinearForestCover c{ { { 0, 1, 2 } }, { 1, 2, 1 } };
    CHECK(parse_cover(format_cover(c, p3), p3) == c);
    auto alpha = cover_to_coalgebra(p3, c, 2);
    CHECK(parse_coalgebra(format_coalgebra(alpha, p3), p3) == alpha);
    CHECK_THROWS(parse_pd("bag 0 7\n", p3));
}
