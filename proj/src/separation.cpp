#include "pebblepath/games.hpp"

#include <algorithm>
#include <array>
#include <random>

namespace pebblepath {

namespace {
    enum class Leaf { red, green, loop, plain };

    auto coloured_signature() -> Signature
    {
        return Signature{ { "E", 2 }, { "G", 1 }, { "R", 1 } };
    }

    auto mark(Structure& s, int v, Leaf t) -> void
    {
        switch (t) {
        case Leaf::red: s.add_tuple("R", { v }); break;
        case Leaf::green: s.add_tuple("G", { v }); break;
        case Leaf::loop: s.add_tuple("E", { v, v }); break;
        case Leaf::plain: break;
        }
    }

    // A centre with three two-step legs ending in the given leaf types.
    auto spider(const std::array<Leaf, 3>& legs) -> Structure
    {
        Structure s(coloured_signature(), 7);
        for (int l = 0; l < 3; ++l) {
            s.add_tuple("E", { 0, 1 + 2 * l });
            s.add_tuple("E", { 1 + 2 * l, 2 + 2 * l });
            mark(s, 2 + 2 * l, legs[l]);
        }
        return s;
    }

    // One centre per pair of legs, pointing at shared leg middles.  A
    // collapsed leg is a single vertex carrying the leaf type itself.
    auto two_leg_cover(const std::array<Leaf, 3>& legs, unsigned collapsed) -> Structure
    {
        int n = 3;
        std::array<int, 3> mid{}, leaf{};
        for (int l = 0; l < 3; ++l) {
            mid[l] = n++;
            leaf[l] = (collapsed >> l & 1) ? mid[l] : n++;
        }
        Structure s(coloured_signature(), n);
        const int pairs[3][2] = { { 0, 1 }, { 0, 2 }, { 1, 2 } };
        for (int c = 0; c < 3; ++c)
            for (int l : pairs[c])
                s.add_tuple("E", { c, mid[l] });
        for (int l = 0; l < 3; ++l) {
            if (leaf[l] != mid[l])
                s.add_tuple("E", { mid[l], leaf[l] });
            mark(s, leaf[l], legs[l]);
        }
        return s;
    }

    auto mutate(const Structure& s, std::mt19937_64& rng) -> Structure
    {
        std::vector<std::vector<Tuple>> rels;
        for (int r = 0; r < s.signature().size(); ++r)
            rels.push_back(s.tuples(r));
        int n = s.size();
        std::uniform_int_distribution<int> rel(0, s.signature().size() - 1), elem(0, n - 1);
        int r = rel(rng);
        Tuple t;
        for (int i = 0; i < s.signature().arity(r); ++i)
            t.push_back(elem(rng));
        auto& ts = rels[r];
        if (auto it = std::find(ts.begin(), ts.end(), t); it != ts.end())
            ts.erase(it);
        else
            ts.push_back(t);
        return Structure(s.signature(), n, rels);
    }

    auto random_structure(int n, double density, std::mt19937_64& rng) -> Structure
    {
        Structure s(coloured_signature(), n);
        std::bernoulli_distribution coin(density);
        for (int r = 0; r < s.signature().size(); ++r) {
            Tuple t(s.signature().arity(r), 0);
            while (true) {
                if (coin(rng))
                    s.add_tuple(r, t);
                std::size_t i = 0;
                while (i < t.size() && ++t[i] == n)
                    t[i++] = 0;
                if (i == t.size())
                    break;
            }
        }
        return s;
    }

    auto separates(const Structure& a, const Structure& b) -> bool
    {
        if (find_homomorphism(a, b))
            return false;
        if (decide_existential_pebble_game(a, b, 2) != Winner::spoiler)
            return false;
        return decide_all_in_one(a, b, 2).winner == Winner::duplicator;
    }
}

auto find_separation_witness(std::uint64_t seed, std::uint64_t max_candidates) -> std::optional<SeparationWitness>
{
    std::mt19937_64 rng(seed);
    std::uint64_t tried = 0;
    auto attempt = [&](const Structure& a, const Structure& b) -> std::optional<SeparationWitness> {
        ++tried;
        if (a.size() <= 8 && b.size() <= 8 && separates(a, b))
            return SeparationWitness{ a, b, tried };
        return std::nullopt;
    };

    std::vector<std::pair<Structure, Structure>> gadgets;
    const Leaf kinds[] = { Leaf::red, Leaf::green, Leaf::loop, Leaf::plain };
    for (int x = 0; x < 4; ++x)
        for (int y = x; y < 4; ++y)
            for (int z = y; z < 4; ++z) {
                std::array<Leaf, 3> legs{ kinds[x], kinds[y], kinds[z] };
                for (unsigned collapsed = 0; collapsed < 8; ++collapsed) {
                    if (tried >= max_candidates)
                        return std::nullopt;
                    auto a = spider(legs);
                    auto b = two_leg_cover(legs, collapsed);
                    if (auto w = attempt(a, b))
                        return w;
                    if (b.size() <= 8)
                        gadgets.emplace_back(std::move(a), std::move(b));
                }
            }
    std::uniform_int_distribution<std::size_t> pick(0, gadgets.size() - 1);
    std::uniform_int_distribution<int> size(2, 8);
    while (tried < max_candidates) {
        if (tried % 2 == 0) {
            auto& [a, b] = gadgets[pick(rng)];
            if (auto w = attempt(mutate(a, rng), mutate(b, rng)))
                return w;
        } else if (auto w = attempt(random_structure(size(rng), 0.2, rng), random_structure(size(rng), 0.2, rng))) {
            return w;
        }
    }
    return std::nullopt;
}

} // namespace pebblepath
