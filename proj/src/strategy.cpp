#include "pebblepath/games.hpp"

#include <algorithm>
#include <map>

namespace pebblepath {

auto strategy_to_cokleisli(const Structure& a, const Structure& b, int k, int n, const DuplicatorStrategy& strategy)
    -> CoKleisliMap
{
    if (strategy.max_len() && *strategy.max_len() < n)
        throw GameError("strategy is only defined up to length " + std::to_string(*strategy.max_len()));
    auto pr = build_pr(a, k, n);
    const auto& index = pr.index;
    std::vector<int> values(index.point_count());
    for (std::uint64_t id = 0; id < index.play_count(); ++id) {
        auto s = index.play_at(id);
        auto answer = strategy.respond(s);
        if (! answer || answer->size() != s.size())
            throw GameError("strategy has no answer to " + encode_play(s, a));
        auto first = index.first_point(s);
        for (std::size_t j = 0; j < s.size(); ++j)
            values[first + j] = (*answer)[j];
    }
    if (! is_homomorphism(pr.structure, b, values))
        throw GameError("extracted map is not a homomorphism out of the pebble-relation structure");
    return CoKleisliMap(index, std::move(values));
}

auto cokleisli_to_strategy(const Structure& a, const Structure& b, const CoKleisliMap& f, bool equality)
    -> DuplicatorStrategy
{
    const auto& index = f.domain();
    if (index.universe() != a.size())
        throw GameError("coKleisli map has the wrong domain");
    auto pr = build_pr(a, index.k(), index.max_len());
    if (! is_homomorphism(pr.structure, b, f.values()))
        throw GameError("coKleisli map is not a homomorphism");
    int n = index.max_len();
    return DuplicatorStrategy(
        [f, equality](const Play& s) -> std::optional<std::vector<int>> {
            const auto& index = f.domain();
            if (! index.contains(s))
                return std::nullopt;
            std::vector<int> answer;
            if (! equality) {
                auto first = index.first_point(s);
                for (std::size_t j = 0; j < s.size(); ++j)
                    answer.push_back(f.at(first + j));
                return answer;
            }
            auto reduced = alias_duplicates(s, index.k());
            for (int j : reduced.index_map)
                answer.push_back(f({ reduced.play, j }));
            return answer;
        },
        n);
}

auto is_duplicating(const Play& s) -> bool
{
    for (std::size_t j = 1; j < s.size(); ++j)
        for (std::size_t i = 0; i < j; ++i)
            if (s[i].element == s[j].element && pebble_active(s, static_cast<int>(i + 1), static_cast<int>(j + 1)))
                return true;
    return false;
}

auto remove_duplicates(const Play& s) -> Reduced
{
    Reduced out;
    std::map<int, int> last;   // pebble -> latest position in out.play
    for (auto& m : s) {
        int hit = 0;
        for (auto [q, pos] : last)
            if (q != m.pebble && out.play[pos - 1].element == m.element)
                hit = pos;
        if (hit) {
            out.index_map.push_back(hit);
            continue;
        }
        out.play.push_back(m);
        last[m.pebble] = static_cast<int>(out.play.size());
        out.index_map.push_back(static_cast<int>(out.play.size()));
    }
    return out;
}

auto alias_duplicates(const Play& s, int k) -> Reduced
{
    Reduced out;
    std::map<int, int> held;                       // real pebble -> element
    std::map<int, int> holders;                    // element -> number of real pebbles on it
    std::map<int, std::pair<int, int>> placed;     // active element -> (virtual pebble, position)
    for (auto& m : s) {
        int freed = 0;
        if (auto it = held.find(m.pebble); it != held.end()) {
            int old = it->second;
            if (--holders[old] == 0) {
                freed = placed[old].first;
                placed.erase(old);
            }
        }
        held[m.pebble] = m.element;
        if (holders[m.element]++ > 0) {
            out.index_map.push_back(placed.at(m.element).second);
            continue;
        }
        int v = freed;
        if (v == 0) {
            std::vector<bool> busy(k + 1, false);
            for (auto& [e, vp] : placed)
                busy[vp.first] = true;
            v = 1;
            while (v <= k && busy[v])
                ++v;
            if (v > k)
                throw GameError("more active elements than pebbles");
        }
        out.play.push_back({ v, m.element });
        int pos = static_cast<int>(out.play.size());
        placed[m.element] = { v, pos };
        out.index_map.push_back(pos);
    }
    return out;
}

auto branching_map(const CoKleisliMap& f, const Play& prefix, int pebble, const Play& suffix) -> BranchingMap
{
    const auto& index = f.domain();
    if (static_cast<int>(prefix.size() + 1 + suffix.size()) > index.max_len())
        throw GameError("branching play exceeds the length bound");
    if (pebble < 1 || pebble > index.k())
        throw GameError("pebble out of range");
    BranchingMap out{ prefix, pebble, suffix, {} };
    IndexedPlay p{ prefix, static_cast<int>(prefix.size() + 1) };
    p.seq.push_back({ pebble, 0 });
    p.seq.insert(p.seq.end(), suffix.begin(), suffix.end());
    for (int x = 0; x < index.universe(); ++x) {
        p.seq[prefix.size()].element = x;
        if (! index.contains(p.seq))
            throw GameError("branching play is not a valid play");
        out.table.push_back(f(p));
    }
    return out;
}

namespace {
    auto composite_is_counit(const CoKleisliMap& f, const CoKleisliMap& g) -> bool
    {
        const auto& index = f.domain();
        for (std::uint64_t id = 0; id < index.point_count(); ++id) {
            auto p = index.point_at(id);
            if (g(coextension(f, p)) != counit(p))
                return false;
        }
        return true;
    }
}

auto check_cokleisli_iso(const CoKleisliMap& f, const CoKleisliMap& g) -> bool
{
    const auto& df = f.domain();
    const auto& dg = g.domain();
    if (df.k() != dg.k() || df.max_len() != dg.max_len())
        return false;
    for (int v : f.values())
        if (v < 0 || v >= dg.universe())
            return false;
    for (int v : g.values())
        if (v < 0 || v >= df.universe())
            return false;
    return composite_is_counit(f, g) && composite_is_counit(g, f);
}

} // namespace pebblepath
