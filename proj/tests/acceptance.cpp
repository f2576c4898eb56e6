// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "pebblepath/bijective.hpp"
#include "pebblepath/comonad.hpp"
#include "pebblepath/decomposition.hpp"
#include "pebblepath/games.hpp"
#include "pebblepath/logic.hpp"
#include "pebblepath/lovasz.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace pebblepath;
using pebblepath::testing::all_digraphs;
using pebblepath::testing::digraph_classes;

namespace {

// Pinned bounds.  Every check below is exact: zero mismatches allowed.
constexpr int law_max_size = 3;
constexpr int law_max_k = 2;
constexpr int law_max_len = 3;
constexpr int corpus_max_vertices = 6;
constexpr std::size_t corpus_min_graphs = 200;
constexpr int game_max_size = 3;
constexpr int game_max_k = 3;
constexpr std::uint64_t separation_seed = 7;
constexpr std::uint64_t separation_candidates = 2000;
constexpr int formula_count = 500;
constexpr int formula_depth = 3;
constexpr std::uint64_t formula_seed = 20240501;
constexpr int translation_universe = 3;
constexpr int bijective_max_size = 3;
constexpr int bijective_max_k = 3;
constexpr int bijective_max_len = 3;
constexpr int branching_k = 2;
constexpr int branching_len = 3;
constexpr int lovasz_k = 2;
constexpr int lovasz_max_size = 5;
constexpr int lovasz_target_max = 5;
constexpr std::uint64_t lovasz_budget = 50'000'000;

struct Outcome {
    bool pass = true;
    std::string detail;
};

auto undirected_classes(int n) -> std::vector<Structure>
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

// Every undirected graph on 1..6 vertices up to isomorphism.
auto graph_corpus() -> std::vector<Structure>
{
    std::vector<Structure> out;
    for (int n = 1; n <= corpus_max_vertices; ++n)
        for (auto& g : undirected_classes(n))
            out.push_back(std::move(g));
    return out;
}

// Least width over every vertex ordering, read straight off the layout.
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

auto structures_up_to(int n) -> std::vector<Structure>
{
    std::vector<Structure> out{ graphs::edgeless(0) };
    for (auto& g : digraph_classes(n))
        out.push_back(std::move(g));
    return out;
}

auto assignments(int universe, int k) -> std::vector<Assignment>
{
    std::vector<Assignment> out;
    if (universe == 0)
        return out;
    Assignment asg(k + 1, 0);
    asg[0] = -1;
    while (true) {
        out.push_back(asg);
        int v = 1;
        for (; v <= k; ++v) {
            if (++asg[v] < universe)
                break;
            asg[v] = 0;
        }
        if (v > k)
            return out;
    }
}

auto all_plays(int k, int universe, int len) -> std::vector<Play>
{
    if (len == 0)
        return { Play{} };
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
            return out;
    }
}

auto permuted(const Structure& s, const std::vector<int>& perm) -> Structure
{
    Structure out(s.signature(), s.size());
    for (int r = 0; r < s.signature().size(); ++r)
        for (auto t : s.tuples(r)) {
            for (auto& x : t)
                x = perm[x];
            out.add_tuple(r, t);
        }
    return out;
}

auto random_target(std::mt19937_64& rng, int n) -> Structure
{
    std::bernoulli_distribution coin(0.35);
    Structure s(graphs::edge_signature(), n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (coin(rng))
                s.add_tuple(0, { x, y });
    return s;
}

auto criterion_1() -> Outcome
{
    Outcome out;
    std::uint64_t structures = 0, checks = 0, failures = 0;
    const std::vector<std::string> required{ "coextension-of-counit", "counit-after-coextension", "coextension-composition",
        "delta-then-pr-counit", "delta-then-counit" };
    for (int n = 0; n <= law_max_size; ++n)
        for (auto& a : all_digraphs(n)) {
            ++structures;
            for (int k = 1; k <= law_max_k; ++k)
                for (int len = 1; len <= law_max_len; ++len) {
                    auto report = check_comonad_laws(a, k, len);
                    for (auto& name : required)
                        if (! report.find(name)) {
                            out.pass = false;
                            out.detail = "law " + name + " missing from the report";
                            return out;
                        }
                    for (auto& law : report.laws) {
                        checks += law.checked;
                        if (law.failures) {
                            failures += law.failures;
                            if (out.pass)
                                out.detail = " first failure: " + law.name + " " + law.counterexample;
                            out.pass = false;
                        }
                    }
                }
        }
    out.detail = std::to_string(structures) + " labelled digraphs, k<=" + std::to_string(law_max_k) + ", n<=" +
                 std::to_string(law_max_len) + ": " + std::to_string(checks) + " law instances, " +
                 std::to_string(failures) + " failures" + out.detail;
    return out;
}

auto criterion_2(const std::vector<Structure>& corpus) -> Outcome
{
    Outcome out;
    std::size_t mismatches = 0;
    for (auto& g : corpus) {
        int pw = pathwidth_exact(g).width;
        int oracle = pathwidth_by_layouts(g);
        auto kappa = coalgebra_number(g);
        bool no_smaller = kappa.k == 1 || ! find_cover(g, kappa.k - 1);
        if (pw != oracle || pw != kappa.k - 1 || validate_coalgebra(g, kappa.witness) || ! no_smaller)
            ++mismatches;
    }
    std::vector<std::string> spot_failures;
    auto spot = [&](const std::string& name, const Structure& g, int expected) {
        int pw = pathwidth_exact(g).width;
        int via_cover = coalgebra_number(g).k - 1;
        if (pw != expected || via_cover != expected)
            spot_failures.push_back(name);
    };
    for (int n = 2; n <= corpus_max_vertices; ++n)
        spot("P" + std::to_string(n), graphs::path(n), 1);
    for (int n = 3; n <= corpus_max_vertices; ++n)
        spot("C" + std::to_string(n), graphs::cycle(n), 2);
    for (int n = 1; n <= corpus_max_vertices; ++n)
        spot("K" + std::to_string(n), graphs::clique(n), n - 1);
    out.pass = corpus.size() >= corpus_min_graphs && mismatches == 0 && spot_failures.empty();
    out.detail = std::to_string(corpus.size()) + " graphs on <=" + std::to_string(corpus_max_vertices) +
                 " vertices, " + std::to_string(mismatches) + " mismatches; spot values P_n=1, C_n=2, K_n=n-1 " +
                 (spot_failures.empty() ? "confirmed" : "failed at " + spot_failures.front());
    return out;
}

auto criterion_3(const std::vector<Structure>& corpus) -> Outcome
{
    Outcome out;
    std::size_t trips = 0, failures = 0;
    for (auto& g : corpus) {
        auto pw = pathwidth_exact(g);
        for (int k = pw.width + 1; k <= pw.width + 2; ++k) {
            ++trips;
            auto cover = pd_to_cover(g, pw.certificate, k);
            auto back = cover_to_pd(g, cover);
            auto check = validate_pd(g, back);
            auto canon = canonicalize_cover(cover);
            auto alpha = cover_to_coalgebra(g, canon, k);
            bool ok = ! validate_cover(g, cover, k) && check && check.width < k && ! validate_coalgebra(g, alpha) &&
                      coalgebra_to_cover(g, alpha) == canon && cover_to_coalgebra(g, coalgebra_to_cover(g, alpha), k) == alpha;
            failures += ! ok;
        }
    }
    out.pass = failures == 0;
    out.detail = std::to_string(trips) + " round trips over " + std::to_string(corpus.size()) + " graphs, " +
                 std::to_string(failures) + " failures";
    return out;
}

auto criterion_4() -> Outcome
{
    Outcome out;
    auto all = structures_up_to(game_max_size);
    std::size_t pairs = 0, disagreements = 0, hom_violations = 0;
    for (auto& a : all)
        for (auto& b : all) {
            bool hom = find_homomorphism(a, b).has_value();
            for (int k = 1; k <= game_max_k; ++k) {
                ++pairs;
                auto aio = decide_all_in_one(a, b, k).winner;
                if (aio != decide_dalmau(a, b, k).winner)
                    ++disagreements;
                if (hom && aio != Winner::duplicator)
                    ++hom_violations;
            }
        }
    out.pass = disagreements == 0 && hom_violations == 0;
    out.detail = std::to_string(pairs) + " (pair, k) instances over " + std::to_string(all.size()) +
                 " structures, " + std::to_string(disagreements) + " disagreements, " + std::to_string(hom_violations) +
                 " homomorphism violations";
    return out;
}

auto criterion_5() -> Outcome
{
    Outcome out;
    auto found = find_separation_witness(separation_seed, separation_candidates);
    if (! found) {
        out.pass = false;
        out.detail = "no pair within " + std::to_string(separation_candidates) + " candidates";
        return out;
    }
    // re-decided independently of the search
    bool classic_spoiler = decide_existential_pebble_game(found->a, found->b, 2) == Winner::spoiler;
    bool aio_duplicator = decide_all_in_one(found->a, found->b, 2).winner == Winner::duplicator;
    out.pass = classic_spoiler && aio_duplicator && found->a.size() <= 8 && found->b.size() <= 8;
    out.detail = "pair of sizes " + std::to_string(found->a.size()) + "/" + std::to_string(found->b.size()) +
                 " after " + std::to_string(found->candidates) + " candidates; classic game " +
                 (classic_spoiler ? "Spoiler" : "Duplicator") + ", all-in-one " + (aio_duplicator ? "Duplicator" : "Spoiler");
    return out;
}

auto criterion_6() -> Outcome
{
    Outcome out;
    std::vector<Structure> structures;
    for (int n = 1; n <= translation_universe; ++n)
        for (auto& g : all_digraphs(n))
            structures.push_back(std::move(g));
    GeneratorOptions options;
    options.k = 2;
    options.depth = formula_depth;
    FormulaGenerator gen(options, formula_seed);
    std::uint64_t evaluations = 0, mismatches = 0, outside = 0;
    for (int i = 0; i < formula_count; ++i) {
        auto f = gen.next();
        if (! validate_restricted(f, options.k))
            ++outside;
        auto tf = translate_t(f, translation_universe);
        auto utf = translate_u(tf);
        for (auto& g : structures)
            for (auto& asg : assignments(g.size(), options.k)) {
                ++evaluations;
                bool truth = model_check(g, asg, f);
                bool t_truth = model_check_translated(g, asg, tf);
                mismatches += t_truth != truth;
                mismatches += model_check(g, asg, utf) != t_truth;
            }
    }
    out.pass = mismatches == 0 && outside == 0;
    out.detail = std::to_string(formula_count) + " formulas x " + std::to_string(structures.size()) +
                 " structures: " + std::to_string(evaluations) + " assignments, " + std::to_string(mismatches) +
                 " mismatches, " + std::to_string(outside) + " formulas outside the fragment";
    return out;
}

struct BijectiveSuite {
    std::size_t instances = 0, agreements = 0, inconclusive = 0, discrepancies = 0;
    std::vector<std::pair<Structure, Structure>> inequivalent;   // at k = lovasz_k
    std::string first_discrepancy;
};

auto run_bijective_suite() -> BijectiveSuite
{
    BijectiveSuite suite;
    auto cls = digraph_classes(bijective_max_size);
    for (auto& a : cls)
        for (auto& b : cls) {
            if (a.size() != b.size())
                continue;
            for (int k = 1; k <= bijective_max_k; ++k) {
                auto ranked = refine_types(a, b, k, bijective_max_len);
                bool stable_equal = equiv_by_stable_types(a, b, k).equivalent;
                bool spoiler_somewhere = false;
                for (int len = 1; len <= bijective_max_len; ++len) {
                    ++suite.instances;
                    bool spoiler = decide_bijective_all_in_one(a, b, k, len).winner == Winner::spoiler;
                    spoiler_somewhere = spoiler_somewhere || spoiler;
                    bool types_split = ranked.distinguished_at && *ranked.distinguished_at <= len;
                    std::string why;
                    if (equiv_by_types(a, b, k, len) == types_split)
                        why = "type refinements disagree";
                    else if (spoiler && ! types_split)
                        why = "Spoiler wins but types agree";
                    else if (spoiler && stable_equal)
                        why = "Spoiler wins against stable-equal types";
                    if (! why.empty()) {
                        ++suite.discrepancies;
                        if (suite.first_discrepancy.empty())
                            suite.first_discrepancy = why + ": " + structure_id(a) + " vs " + structure_id(b) +
                                                      " k=" + std::to_string(k) + " len=" + std::to_string(len);
                    } else if (! spoiler && types_split) {
                        // all-in-one Spoiler may need longer words than the rank
                        ++suite.inconclusive;
                    } else {
                        ++suite.agreements;
                    }
                }
                if (k == lovasz_k && spoiler_somewhere)
                    suite.inequivalent.emplace_back(a, b);
            }
        }
    return suite;
}

// Every branching map of the lifted isomorphism A -> pi A is a bijection.
auto branching_bijections(std::size_t& isos, std::size_t& maps) -> bool
{
    bool ok = true;
    for (auto& a : digraph_classes(bijective_max_size)) {
        int n = a.size();
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        do {
            std::vector<int> inv(n);
            for (int x = 0; x < n; ++x)
                inv[perm[x]] = x;
            PlayIndex index(branching_k, n, branching_len);
            auto b = permuted(a, perm);
            auto f = lift_map(index, perm);
            auto g = lift_map(index, inv);
            ++isos;
            ok = ok && check_cokleisli_iso(f, g) && is_isomorphism(a, b, perm);
            for (int plen = 0; plen < branching_len; ++plen)
                for (int slen = 0; plen + slen < branching_len; ++slen)
                    for (int p = 1; p <= branching_k; ++p)
                        for (auto& s : all_plays(branching_k, n, plen))
                            for (auto& t : all_plays(branching_k, n, slen)) {
                                auto table = branching_map(f, s, p, t).table;
                                ++maps;
                                std::sort(table.begin(), table.end());
                                for (int x = 0; x < n; ++x)
                                    ok = ok && table[x] == x;
                            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return ok;
}

auto criterion_7(const BijectiveSuite& suite) -> Outcome
{
    Outcome out;
    std::size_t isos = 0, maps = 0;
    bool branching = branching_bijections(isos, maps);
    out.pass = suite.discrepancies == 0 && branching;
    out.detail = std::to_string(suite.instances) + " (pair, k, length) instances: " + std::to_string(suite.agreements) +
                 " agree, " + std::to_string(suite.inconclusive) + " inconclusive, " +
                 std::to_string(suite.discrepancies) + " discrepancies" +
                 (suite.first_discrepancy.empty() ? "" : " (first " + suite.first_discrepancy + ")") + "; " +
                 std::to_string(maps) + " branching maps of " + std::to_string(isos) + " coKleisli isos " +
                 (branching ? "all bijective" : "NOT all bijective");
    return out;
}

auto criterion_8(const BijectiveSuite& suite) -> Outcome
{
    Outcome out;
    auto sig = graphs::edge_signature();
    auto tests = enumerate_pw_structures(sig, lovasz_k, lovasz_max_size, lovasz_budget);

    std::mt19937_64 rng(5);
    std::vector<Structure> targets{ graphs::edgeless(0), graphs::clique(2), graphs::clique(3), graphs::cycle(5) };
    for (int n = 1; n <= lovasz_target_max; ++n)
        targets.push_back(random_target(rng, n));
    std::size_t count_mismatches = 0;
    for (auto& c : tests)
        for (auto& a : targets) {
            count_mismatches += hom_count_pd(c.structure, c.pd, a) != count_homs_bruteforce(c.structure, a);
        }

    auto k3k2 = lovasz_equiv(graphs::clique(3), graphs::clique(2), lovasz_k, 3);
    auto edge = structure_id(graphs::directed(2, { { 0, 1 } }));
    auto it = std::find_if(k3k2.entries.begin(), k3k2.entries.end(), [&](const HomVectorEntry& e) { return e.id == edge; });
    bool edge_ok = ! k3k2.equivalent && it != k3k2.entries.end() && it->in_a == 6 && it->in_b == 2;

    // one hom vector per structure, shared by every pair
    std::map<std::string, HomVector> vectors;
    auto vector_of = [&](const Structure& s) -> const HomVector& {
        auto id = structure_id(s);
        auto found = vectors.find(id);
        if (found == vectors.end())
            found = vectors.emplace(id, hom_vector(tests, s)).first;
        return found->second;
    };
    std::size_t undistinguished = 0;
    for (auto& [a, b] : suite.inequivalent)
        undistinguished += vector_of(a) == vector_of(b);

    out.pass = count_mismatches == 0 && edge_ok && undistinguished == 0;
    out.detail = std::to_string(tests.size()) + " test structures (pw<" + std::to_string(lovasz_k) + ", <=" +
                 std::to_string(lovasz_max_size) + " elements) x " + std::to_string(targets.size()) + " targets: " +
                 std::to_string(count_mismatches) + " count mismatches; K3 vs K2 single edge " +
                 (it == k3k2.entries.end() ? std::string("missing") : it->in_a.str() + " vs " + it->in_b.str()) + "; " +
                 std::to_string(suite.inequivalent.size() - undistinguished) + "/" +
                 std::to_string(suite.inequivalent.size()) + " bijective-inequivalent pairs distinguished";
    return out;
}

} // namespace

int main()
{
    bool all_pass = true;
    auto report = [&](int number, const std::function<Outcome()>& run) {
        auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = { false, std::string("exception: ") + e.what() };
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all_pass = all_pass && o.pass;
        std::printf("%s criterion %d: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", number, o.detail.c_str(), secs);
        std::fflush(stdout);
    };

    auto corpus = graph_corpus();
    BijectiveSuite suite;
    report(1, criterion_1);
    report(2, [&] { return criterion_2(corpus); });
    report(3, [&] { return criterion_3(corpus); });
    report(4, criterion_4);
    report(5, criterion_5);
    report(6, criterion_6);
    report(7, [&] {
        suite = run_bijective_suite();
        return criterion_7(suite);
    });
    report(8, [&] { return criterion_8(suite); });
    return all_pass ? 0 : 1;
}
