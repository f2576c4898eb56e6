#include "pebblepath/bijective.hpp"
#include "pebblepath/certificate.hpp"
#include "pebblepath/games.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace pebblepath;
using pebblepath::testing::all_digraphs;
using pebblepath::testing::digraph_classes;
using pebblepath::testing::disjoint_union;

namespace {
    auto small_pairs(int max_n)
    {
        std::vector<std::pair<Structure, Structure>> out;
        auto cls = digraph_classes(max_n);
        for (auto& x : cls)
            for (auto& y : cls)
                out.emplace_back(x, y);
        return out;
    }

    // Every play of length len over k pebbles and the given universe.
    auto all_plays(int k, int universe, int len)
    {
        std::vector<Play> out;
        Play s(len, { 1, 0 });
        while (true) {
            out.push_back(s);
            int i = 0;
            for (; i < len; ++i) {
                if (++s[i].element < universe)
                    break;
                s[i].element = 0;
                if (++s[i].pebble <= k)
                    break;
                s[i].pebble = 1;
            }
            if (i == len)
                break;
        }
        return out;
    }

    // The separating pair: a spider with red, green and looped legs, and
    // three centres each reaching two of the legs.
    auto separation_pair() -> std::pair<Structure, Structure>
    {
        Signature sig{ { "E", 2 }, { "G", 1 }, { "R", 1 } };
        Structure a(sig, 7);
        for (auto [x, y] : std::vector<std::pair<int, int>>{ { 0, 1 }, { 1, 2 }, { 0, 3 }, { 3, 4 }, { 0, 5 }, { 5, 6 }, { 6, 6 } })
            a.add_tuple("E", { x, y });
        a.add_tuple("R", { 2 });
        a.add_tuple("G", { 4 });
        Structure b(sig, 8);
        for (auto [x, y] : std::vector<std::pair<int, int>>{
                 { 0, 3 }, { 0, 4 }, { 1, 3 }, { 1, 5 }, { 2, 4 }, { 2, 5 }, { 3, 6 }, { 4, 7 }, { 5, 5 } })
            b.add_tuple("E", { x, y });
        b.add_tuple("R", { 6 });
        b.add_tuple("G", { 7 });
        return { a, b };
    }
}

TEST_CASE("all-in-one game on small examples")
{
    auto k2 = graphs::clique(2);
    auto k3 = graphs::clique(3);
    SUBCASE("identity is a Duplicator win")
    {
        auto v = decide_all_in_one(k3, k3, 3);
        CHECK(v.winner == Winner::duplicator);
        REQUIRE(v.strategy);
        Play w{ { 1, 0 }, { 2, 1 }, { 3, 2 } };
        CHECK(v.strategy->respond(w) == std::vector<int>{ 0, 1, 2 });
    }
    SUBCASE("an edge against two isolated vertices")
    {
        auto v = decide_all_in_one(k2, graphs::edgeless(2), 2);
        CHECK(v.winner == Winner::spoiler);
        CHECK(v.spoiler_word == Play{ { 1, 0 }, { 2, 1 } });
    }
    SUBCASE("two pebbles never see the triangle")
    {
        CHECK(decide_all_in_one(k3, k2, 2).winner == Winner::duplicator);
        CHECK(decide_all_in_one(k3, k2, 3).winner == Winner::spoiler);
    }
    SUBCASE("length bound")
    {
        CHECK(decide_all_in_one(k3, k2, 3, { true, 2 }).winner == Winner::duplicator);
        CHECK(decide_all_in_one(k3, k2, 3, { true, 3 }).winner == Winner::spoiler);
    }
}

TEST_CASE("Dalmau game on small examples")
{
    auto k2 = graphs::clique(2);
    auto k3 = graphs::clique(3);
    CHECK(decide_dalmau(k3, k2, 3).winner == Winner::spoiler);
    CHECK(decide_dalmau(k3, k2, 2).winner == Winner::duplicator);
    CHECK(decide_dalmau(k2, k3, 3).winner == Winner::duplicator);
    CHECK(decide_dalmau(graphs::path(4), k2, 2).winner == Winner::duplicator);
    auto v = decide_dalmau(k3, k2, 3);
    DalmauGame game(k3, k2, 3);
    auto c = game.initial();
    for (auto& d : v.spoiler_moves)
        c = game.move(c, d);
    CHECK(c.homs.empty());
    CHECK_THROWS_AS(game.move(game.initial(), { 0, 1, 2, 0 }), GameError);
}

TEST_CASE("all-in-one and Dalmau agree on structures up to two elements")
{
    for (auto& [a, b] : small_pairs(2))
        for (int k = 1; k <= 3; ++k) {
            auto aio = decide_all_in_one(a, b, k).winner;
            CHECK(aio == decide_dalmau(a, b, k).winner);
            CHECK(aio == decide_all_in_one(a, b, k, { false, std::nullopt }).winner);
            if (find_homomorphism(a, b))
                CHECK(aio == Winner::duplicator);
        }
}

TEST_CASE("Duplicator wins are antitone in the number of pebbles")
{
    for (auto& [a, b] : small_pairs(2)) {
        bool lost = false;
        for (int k = 1; k <= 3; ++k) {
            bool dup = decide_all_in_one(a, b, k).winner == Winner::duplicator;
            CHECK_FALSE((lost && dup));
            lost = lost || ! dup;
        }
    }
}

TEST_CASE("classic game is at least as strong for Spoiler")
{
    for (auto& [a, b] : small_pairs(2))
        for (int k = 1; k <= 2; ++k)
            if (decide_existential_pebble_game(a, b, k) == Winner::duplicator)
                CHECK(decide_all_in_one(a, b, k).winner == Winner::duplicator);
}

TEST_CASE("separating pair")
{
    auto [a, b] = separation_pair();
    CHECK_FALSE(find_homomorphism(a, b));
    CHECK(decide_existential_pebble_game(a, b, 2) == Winner::spoiler);
    CHECK(decide_all_in_one(a, b, 2).winner == Winner::duplicator);
    CHECK(decide_dalmau(a, b, 2).winner == Winner::duplicator);
    auto found = find_separation_witness(7, 2000);
    REQUIRE(found);
    CHECK(decide_existential_pebble_game(found->a, found->b, 2) == Winner::spoiler);
    CHECK(decide_all_in_one(found->a, found->b, 2).winner == Winner::duplicator);
}

TEST_CASE("strategy to coKleisli map")
{
    SUBCASE("identity strategy gives the counit")
    {
        auto a = graphs::path(3);
        DuplicatorStrategy copy(
            [](const Play& s) -> std::optional<std::vector<int>> {
                std::vector<int> out;
                for (auto& m : s)
                    out.push_back(m.element);
                return out;
            },
            std::nullopt);
        auto f = strategy_to_cokleisli(a, a, 2, 3, copy);
        CHECK(f.values() == counit_map(f.domain()).values());
        auto answer = cokleisli_to_strategy(a, a, f, true).respond({ { 1, 2 }, { 2, 1 }, { 1, 0 } });
        CHECK(answer == std::vector<int>{ 2, 1, 0 });
    }
    SUBCASE("a homomorphism lifts through the counit")
    {
        auto a = graphs::clique(2);
        auto b = graphs::clique(3);
        auto v = decide_all_in_one(a, b, 2);
        auto f = strategy_to_cokleisli(a, b, 2, 2, *v.strategy);
        auto pr = build_pr(a, 2, 2);
        CHECK(is_homomorphism(pr.structure, b, f.values()));
        CHECK(is_homomorphism(pr.structure, b, lift_map(f.domain(), { 0, 1 }).values()));
        // least answers: the first move always goes to vertex 0
        CHECK(f({ { { 1, 1 } }, 1 }) == 0);
        CHECK(f({ { { 1, 1 }, { 2, 0 } }, 2 }) == 1);
    }
    SUBCASE("triangle into an edge with two pebbles")
    {
        auto a = graphs::clique(3);
        auto b = graphs::clique(2);
        auto v = decide_all_in_one(a, b, 2);
        auto f = strategy_to_cokleisli(a, b, 2, 3, *v.strategy);
        auto pr = build_pr(a, 2, 3);
        CHECK(is_homomorphism(pr.structure, b, f.values()));
    }
    SUBCASE("short strategies are refused")
    {
        auto a = graphs::clique(3);
        auto b = graphs::clique(2);
        auto v = decide_all_in_one(a, b, 2, { true, 2 });
        CHECK_THROWS_AS(strategy_to_cokleisli(a, b, 2, 3, *v.strategy), GameError);
    }
}

TEST_CASE("coKleisli round trip wins every bounded word")
{
    for (auto& [a, b] : small_pairs(2))
        for (int k = 1; k <= 2; ++k) {
            const int n = 3;
            auto v = decide_all_in_one(a, b, k, { true, n });
            if (v.winner != Winner::duplicator)
                continue;
            auto f = strategy_to_cokleisli(a, b, k, n, *v.strategy);
            for (bool equality : { false, true }) {
                auto strategy = cokleisli_to_strategy(a, b, f, equality);
                AllInOneGame game(a, b, k, equality ? MapMode::function : MapMode::relation);
                for (int len = 1; len <= n; ++len)
                    for (auto& w : all_plays(k, a.size(), len)) {
                        auto answer = strategy.respond(w);
                        REQUIRE(answer);
                        CHECK(game.is_winning_response(w, *answer));
                    }
            }
        }
}

TEST_CASE("duplicate removal")
{
    SUBCASE("examples")
    {
        auto r = remove_duplicates({ { 1, 0 }, { 2, 0 } });
        CHECK(r.play == Play{ { 1, 0 } });
        CHECK(r.index_map == std::vector<int>{ 1, 1 });
        Play repeated{ { 1, 0 }, { 2, 1 }, { 1, 1 } };
        CHECK_FALSE(is_duplicating(Play{ { 1, 0 }, { 2, 1 }, { 1, 2 } }));
        auto id = remove_duplicates({ { 1, 0 }, { 2, 1 }, { 1, 2 } });
        CHECK(id.index_map == std::vector<int>{ 1, 2, 3 });
        CHECK(is_duplicating(repeated));
    }
    SUBCASE("outputs are never duplicating and keep counits")
    {
        for (int len = 1; len <= 4; ++len)
            for (auto& s : all_plays(3, 3, len)) {
                for (auto r : { remove_duplicates(s), alias_duplicates(s, 3) }) {
                    CHECK_FALSE(is_duplicating(r.play));
                    REQUIRE(r.index_map.size() == s.size());
                    for (std::size_t j = 0; j < s.size(); ++j) {
                        CHECK(r.index_map[j] <= static_cast<int>(j + 1));
                        CHECK(r.play[r.index_map[j] - 1].element == s[j].element);
                    }
                }
                auto al = alias_duplicates(s, 3);
                CHECK(is_valid_play(al.play, 3, 3));
                // every element active in s is carried by an active pebble at the end
                for (std::size_t j = 0; j < s.size(); ++j)
                    if (pebble_active(s, static_cast<int>(j + 1), static_cast<int>(s.size())))
                        CHECK(pebble_active(al.play, al.index_map[j], static_cast<int>(al.play.size())));
            }
    }
    SUBCASE("greedy deletion loses where aliasing wins")
    {
        // E(a, b) with a = 0, b = 1; B adds an isolated vertex 2
        auto a = graphs::directed(2, { { 0, 1 } });
        auto b = graphs::directed(3, { { 0, 1 } });
        PlayIndex index(2, 2, 3);
        auto values = counit_map(index).values();
        values[index.point_id({ { { 1, 0 }, { 1, 1 } }, 1 })] = 2;
        CoKleisliMap f(index, values);
        auto pr = build_pr(a, 2, 3);
        REQUIRE(is_homomorphism(pr.structure, b, f.values()));

        Play s{ { 1, 0 }, { 2, 0 }, { 1, 1 } };
        AllInOneGame game(a, b, 2, MapMode::function);
        auto greedy = remove_duplicates(s);
        CHECK(greedy.play == Play{ { 1, 0 }, { 1, 1 } });
        std::vector<int> greedy_answer;
        for (int j : greedy.index_map)
            greedy_answer.push_back(f({ greedy.play, j }));
        CHECK_FALSE(game.is_winning_response(s, greedy_answer));

        auto answer = cokleisli_to_strategy(a, b, f, true).respond(s);
        REQUIRE(answer);
        CHECK(game.is_winning_response(s, *answer));
    }
}

TEST_CASE("branching maps")
{
    auto a = graphs::path(3);
    PlayIndex index(2, 3, 3);
    auto eps = counit_map(index);
    auto psi = branching_map(eps, { { 1, 2 } }, 2, { { 1, 0 } });
    CHECK(psi.table == std::vector<int>{ 0, 1, 2 });
    CoKleisliMap constant(index, std::vector<int>(index.point_count(), 1));
    CHECK(branching_map(constant, {}, 1, {}).table == std::vector<int>{ 1, 1, 1 });
    CHECK_THROWS_AS(branching_map(eps, { { 1, 0 }, { 1, 1 } }, 1, { { 1, 0 } }), GameError);

    SUBCASE("isomorphisms give bijections")
    {
        // a path relabelled by a nontrivial automorphism-free permutation
        auto b = graphs::directed(3, { { 1, 2 }, { 2, 1 }, { 2, 0 }, { 0, 2 } });
        auto h = find_isomorphism(a, b);
        REQUIRE(h);
        std::vector<int> inv(3);
        for (int x = 0; x < 3; ++x)
            inv[(*h)[x]] = x;
        auto f = lift_map(index, *h);
        auto g = lift_map(PlayIndex(2, 3, 3), inv);
        CHECK(check_cokleisli_iso(f, g));
        CHECK(check_cokleisli_iso(eps, eps));
        CHECK_FALSE(check_cokleisli_iso(f, eps));
        for (int plen = 0; plen <= 2; ++plen)
            for (int slen = 0; plen + slen <= 2; ++slen)
                for (int p = 1; p <= 2; ++p) {
                    auto prefixes = plen ? all_plays(2, 3, plen) : std::vector<Play>{ {} };
                    auto suffixes = slen ? all_plays(2, 3, slen) : std::vector<Play>{ {} };
                    for (auto& s : prefixes)
                        for (auto& t : suffixes) {
                            auto table = branching_map(f, s, p, t).table;
                            std::sort(table.begin(), table.end());
                            CHECK(table == std::vector<int>{ 0, 1, 2 });
                        }
                }
    }
}

namespace {
    // Brute force: every answer vector and every bijection, checked with
    // partial isomorphism tests on every prefix.
    auto brute_answer_exists(const Structure& a, const Structure& b, int k, const BijectiveWord& w) -> bool
    {
        std::vector<int> free;
        for (std::size_t i = 0; i < w.moves.size(); ++i)
            if (static_cast<int>(i) + 1 != w.hidden)
                free.push_back(static_cast<int>(i));
        BijectiveAnswer ans;
        ans.images.assign(w.moves.size(), -1);
        std::vector<int> pick(free.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < free.size(); ++i)
                ans.images[free[i]] = pick[i];
            ans.bijection.resize(a.size());
            std::iota(ans.bijection.begin(), ans.bijection.end(), 0);
            do {
                if (is_winning_bijective_answer(a, b, k, w, ans))
                    return true;
            } while (w.hidden > 0 && std::next_permutation(ans.bijection.begin(), ans.bijection.end()));
            std::size_t i = 0;
            while (i < pick.size() && ++pick[i] == b.size())
                pick[i++] = 0;
            if (i == pick.size())
                return false;
        }
    }
}

TEST_CASE("bijective all-in-one game")
{
    auto k2 = graphs::clique(2);
    CHECK(decide_bijective_all_in_one(k2, k2, 2, 3).winner == Winner::duplicator);
    auto unequal = decide_bijective_all_in_one(graphs::clique(3), k2, 2, 3);
    CHECK(unequal.winner == Winner::spoiler);
    CHECK(unequal.spoiler_word.moves.empty());

    SUBCASE("answers agree with brute force on every word")
    {
        auto cls = digraph_classes(2);
        for (auto& a : cls)
            for (auto& b : cls) {
                if (a.size() != b.size())
                    continue;
                for (int len = 1; len <= 3; ++len)
                    for (auto& s : all_plays(2, a.size(), len))
                        for (int h = 0; h <= len; ++h) {
                            BijectiveWord w{ s, h };
                            auto found = bijective_answer(a, b, 2, w);
                            CHECK(found.has_value() == brute_answer_exists(a, b, 2, w));
                            if (found)
                                CHECK(is_winning_bijective_answer(a, b, 2, w, *found));
                        }
            }
    }
    SUBCASE("two edges against a path")
    {
        auto two_edges = disjoint_union(k2, k2);
        auto p4 = graphs::path(4);
        // frozen from the brute-force oracle above
        auto v = decide_bijective_all_in_one(two_edges, p4, 2, 3);
        CHECK(v.winner == Winner::spoiler);
        CHECK_FALSE(brute_answer_exists(two_edges, p4, 2, v.spoiler_word));
        CHECK(decide_bijective_all_in_one(two_edges, p4, 2, 2).winner == Winner::duplicator);
        CHECK(decide_bijective_all_in_one(two_edges, p4, 1, 3).winner == Winner::duplicator);
    }
    SUBCASE("bijective Duplicator wins imply all-in-one wins")
    {
        auto cls = digraph_classes(3);
        for (int len = 1; len <= 3; ++len)
            for (std::size_t i = 0; i < cls.size(); ++i)
                for (std::size_t j = 0; j < cls.size(); ++j) {
                    auto& a = cls[i];
                    auto& b = cls[j];
                    if (a.size() != b.size() || decide_bijective_all_in_one(a, b, 2, len).winner != Winner::duplicator)
                        continue;
                    CHECK(decide_all_in_one(a, b, 2, { true, len }).winner == Winner::duplicator);
                    if (decide_bijective_all_in_one(b, a, 2, len).winner == Winner::duplicator)
                        CHECK(decide_all_in_one(b, a, 2, { true, len }).winner == Winner::duplicator);
                }
    }
    SUBCASE("Spoiler only plays on the left")
    {
        // three isolated vertices against an edge plus an isolated vertex
        auto a = graphs::edgeless(3);
        auto b = graphs::directed(3, { { 0, 1 } });
        CHECK(decide_bijective_all_in_one(a, b, 2, 2).winner == Winner::duplicator);
        CHECK(decide_bijective_all_in_one(b, a, 2, 2).winner == Winner::spoiler);
        CHECK(decide_bijective_all_in_one(a, b, 2, 3).winner == Winner::spoiler);
    }
}

TEST_CASE("certificates re-verify")
{
    auto k2 = graphs::clique(2);
    auto k3 = graphs::clique(3);
    auto check = [](const std::string& cert, const Structure& a, const Structure& b, Winner w) {
        auto c = verify_certificate(cert, a, b);
        CHECK_MESSAGE(c.ok, c.message);
        CHECK(c.winner == w);
    };
    for (auto [a, b, k] : { std::tuple{ k3, k2, 2 }, std::tuple{ k3, k2, 3 }, std::tuple{ k2, graphs::edgeless(2), 2 } }) {
        for (auto opts : { AioOptions{}, AioOptions{ false, 3 } }) {
            auto v = decide_all_in_one(a, b, k, opts);
            check(aio_certificate(v, a, b, k, opts), a, b, v.winner);
        }
        auto d = decide_dalmau(a, b, k);
        check(dalmau_certificate(d, a, b, k), a, b, d.winner);
    }
    auto two_edges = disjoint_union(k2, k2);
    auto p4 = graphs::path(4);
    for (int len : { 2, 3 }) {
        auto v = decide_bijective_all_in_one(two_edges, p4, 2, len);
        check(bijective_certificate(v, two_edges, 2, len), two_edges, p4, v.winner);
    }

    SUBCASE("tampering is detected")
    {
        auto v = decide_all_in_one(k2, graphs::edgeless(2), 2);
        auto cert = aio_certificate(v, k2, graphs::edgeless(2), 2, {});
        auto cut = cert.substr(0, cert.rfind("move"));
        CHECK_FALSE(verify_certificate(cut, k2, graphs::edgeless(2)).ok);
        auto dup = decide_all_in_one(k3, k2, 2);
        auto dcert = aio_certificate(dup, k3, k2, 2, {});
        auto last = dcert.rfind("state");
        CHECK_FALSE(verify_certificate(dcert.substr(0, last), k3, k2).ok);
        CHECK_THROWS_AS(verify_certificate("game aio\nk 2\n", k3, k2), GameError);
    }
}
