#include "pebblepath/lovasz.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <tuple>

namespace pebblepath {

auto structure_id(const Structure& s) -> std::string
{
    auto form = canonical_form(s);
    std::ostringstream out;
    out << s.size() << '|';
    for (int r = 0; r < s.signature().size(); ++r) {
        if (r)
            out << ';';
        out << s.signature().symbol(r).name << ':';
        for (std::size_t i = 0; i < form[r].size(); ++i) {
            if (i)
                out << ',';
            if (form[r][i].empty())
                out << "()";
            for (std::size_t j = 0; j < form[r][i].size(); ++j)
                out << (j ? "-" : "") << form[r][i][j];
        }
    }
    return out.str();
}

namespace {
    const std::string bag_marker = " bag";

    struct Growth {
        Structure structure;
        std::vector<int> bag;
        PathDecomposition pd;
    };

    auto marked_key(const Growth& g) -> std::pair<int, std::vector<std::vector<Tuple>>>
    {
        auto sig = g.structure.signature().with({ bag_marker, 1 });
        Structure marked(sig, g.structure.size());
        for (int r = 0; r < g.structure.signature().size(); ++r)
            for (auto& t : g.structure.tuples(r))
                marked.add_tuple(g.structure.signature().symbol(r).name, t);
        for (int e : g.bag)
            marked.add_tuple(bag_marker, { e });
        return { g.structure.size(), canonical_form(marked) };
    }

    // Tuples over bag + {v} that mention v.
    auto fresh_tuples(const Signature& sig, const std::vector<int>& bag, int v) -> std::vector<std::pair<int, Tuple>>
    {
        std::vector<int> pool = bag;
        pool.push_back(v);
        std::vector<std::pair<int, Tuple>> out;
        for (int r = 0; r < sig.size(); ++r) {
            int ar = sig.arity(r);
            if (ar == 0)
                continue;
            std::vector<std::size_t> pos(ar, 0);
            while (true) {
                Tuple t;
                for (auto p : pos)
                    t.push_back(pool[p]);
                if (std::find(t.begin(), t.end(), v) != t.end())
                    out.emplace_back(r, std::move(t));
                int i = 0;
                while (i < ar && ++pos[i] == pool.size())
                    pos[i++] = 0;
                if (i == ar)
                    break;
            }
        }
        return out;
    }

    auto nullary_starts(const Signature& sig) -> std::vector<Structure>
    {
        std::vector<int> nullary;
        for (int r = 0; r < sig.size(); ++r)
            if (sig.arity(r) == 0)
                nullary.push_back(r);
        std::vector<Structure> out;
        for (std::uint32_t mask = 0; mask < (1u << nullary.size()); ++mask) {
            Structure s(sig, 0);
            for (std::size_t i = 0; i < nullary.size(); ++i)
                if (mask >> i & 1)
                    s.add_tuple(nullary[i], {});
            out.push_back(std::move(s));
        }
        return out;
    }

    auto sorted_classes(std::map<std::string, PwStructure>& found) -> std::vector<PwStructure>
    {
        std::vector<PwStructure> out;
        for (auto& [id, p] : found)
            out.push_back(std::move(p));
        std::sort(out.begin(), out.end(), [](const PwStructure& x, const PwStructure& y) {
            auto xs = x.structure.size(), ys = y.structure.size();
            auto xt = x.structure.tuple_count(), yt = y.structure.tuple_count();
            return std::tie(xs, xt, x.id) < std::tie(ys, yt, y.id);
        });
        return out;
    }

    auto check_bounds(const Signature& sig, int k, int max_size) -> void
    {
        if (k < 1)
            throw DecompositionError("pathwidth bound k must be at least 1");
        if (max_size < 0 || max_size > 9)
            throw BudgetExceeded("max_size must lie in 0..9");
        if (sig.index_of(bag_marker))
            throw StructureError("signature uses a reserved relation name");
    }
}

auto enumerate_pw_structures(const Signature& sig, int k, int max_size, std::uint64_t budget) -> std::vector<PwStructure>
{
    check_bounds(sig, k, max_size);
    std::set<std::pair<int, std::vector<std::vector<Tuple>>>> seen;
    std::vector<Growth> work;
    for (auto& s : nullary_starts(sig)) {
        Growth g{ std::move(s), {}, {} };
        seen.insert(marked_key(g));
        work.push_back(std::move(g));
    }
    std::map<std::string, PwStructure> found;
    std::uint64_t steps = 0;
    auto push = [&](Growth g) {
        if (++steps > budget)
            throw BudgetExceeded("structure enumeration exceeded its budget of " + std::to_string(budget) + " steps");
        if (seen.insert(marked_key(g)).second)
            work.push_back(std::move(g));
    };
    while (! work.empty()) {
        auto g = std::move(work.back());
        work.pop_back();
        auto id = structure_id(g.structure);
        found.try_emplace(id, PwStructure{ g.structure, g.pd, id });

        for (std::size_t i = 0; i < g.bag.size(); ++i) {
            auto next = g;
            next.bag.erase(next.bag.begin() + static_cast<long>(i));
            push(std::move(next));
        }
        if (static_cast<int>(g.bag.size()) >= k || g.structure.size() >= max_size)
            continue;
        int v = g.structure.size();
        auto candidates = fresh_tuples(sig, g.bag, v);
        if (candidates.size() >= 32)
            throw BudgetExceeded("too many candidate tuples per new element");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{ 1 } << candidates.size()); ++mask) {
            Growth next{ Structure(sig, v + 1), g.bag, g.pd };
            for (int r = 0; r < sig.size(); ++r)
                for (auto& t : g.structure.tuples(r))
                    next.structure.add_tuple(r, t);
            for (std::size_t c = 0; c < candidates.size(); ++c)
                if (mask >> c & 1)
                    next.structure.add_tuple(candidates[c].first, candidates[c].second);
            next.bag.push_back(v);
            auto bag = next.bag;
            std::sort(bag.begin(), bag.end());
            next.pd.bags.push_back(std::move(bag));
            push(std::move(next));
        }
    }
    return sorted_classes(found);
}

auto enumerate_pw_structures_by_filter(const Signature& sig, int k, int max_size, std::uint64_t budget) -> std::vector<PwStructure>
{
    check_bounds(sig, k, max_size);
    std::map<std::string, PwStructure> found;
    std::uint64_t steps = 0;
    for (int n = 0; n <= max_size; ++n) {
        std::vector<std::pair<int, Tuple>> slots;
        for (int r = 0; r < sig.size(); ++r) {
            int ar = sig.arity(r);
            std::vector<int> t(ar, 0);
            if (n == 0 && ar > 0)
                continue;
            while (true) {
                slots.emplace_back(r, t);
                int i = 0;
                while (i < ar && ++t[i] == n)
                    t[i++] = 0;
                if (i == ar)
                    break;
            }
        }
        if (slots.size() >= 40 || (std::uint64_t{ 1 } << slots.size()) > budget - steps)
            throw BudgetExceeded("exhaustive enumeration at size " + std::to_string(n) + " exceeds the budget");
        for (std::uint64_t mask = 0; mask < (std::uint64_t{ 1 } << slots.size()); ++mask) {
            ++steps;
            Structure s(sig, n);
            for (std::size_t i = 0; i < slots.size(); ++i)
                if (mask >> i & 1)
                    s.add_tuple(slots[i].first, slots[i].second);
            auto id = structure_id(s);
            if (found.count(id))
                continue;
            auto pw = pathwidth_exact(s);
            if (pw.width < k)
                found.emplace(id, PwStructure{ std::move(s), std::move(pw.certificate), id });
        }
    }
    return sorted_classes(found);
}

auto hom_count_pd(const Structure& c, const PathDecomposition& pd, const Structure& a) -> BigCount
{
    if (c.signature() != a.signature())
        throw StructureError("structures have different signatures");
    if (auto check = validate_pd(c, pd); ! check)
        throw DecompositionError("invalid path decomposition (" + check.violation->clause + "): " + check.violation->detail);

    // each tuple is checked at the first bag holding all its elements
    std::vector<std::vector<std::pair<int, const Tuple*>>> checks(pd.bags.size());
    for (int r = 0; r < c.signature().size(); ++r) {
        for (auto& t : c.tuples(r)) {
            if (t.empty()) {
                if (! a.holds(r, t))
                    return 0;
                continue;
            }
            auto holds_all = [&](const std::vector<int>& bag) {
                return std::all_of(t.begin(), t.end(), [&](int x) { return std::find(bag.begin(), bag.end(), x) != bag.end(); });
            };
            auto it = std::find_if(pd.bags.begin(), pd.bags.end(), holds_all);
            if (it == pd.bags.end())
                throw DecompositionError("a tuple of the structure lies in no bag");
            checks[it - pd.bags.begin()].emplace_back(r, &t);
        }
    }

    // keys list images in bag order
    std::map<std::vector<int>, BigCount> table{ { {}, 1 } };
    std::vector<int> prev;
    std::vector<int> image(c.size(), -1);
    for (std::size_t x = 0; x < pd.bags.size(); ++x) {
        auto& bag = pd.bags[x];
        std::vector<int> keep_pos, fresh_pos;
        std::vector<int> prev_pos(bag.size(), -1);
        for (std::size_t i = 0; i < bag.size(); ++i) {
            auto it = std::find(prev.begin(), prev.end(), bag[i]);
            if (it == prev.end())
                fresh_pos.push_back(static_cast<int>(i));
            else
                prev_pos[i] = static_cast<int>(it - prev.begin());
        }
        std::map<std::vector<int>, BigCount> next;
        for (auto& [key, count] : table) {
            std::vector<int> images(bag.size(), 0);
            for (std::size_t i = 0; i < bag.size(); ++i)
                if (prev_pos[i] >= 0)
                    images[i] = key[prev_pos[i]];
            if (! fresh_pos.empty() && a.size() == 0)
                continue;
            while (true) {
                for (std::size_t i = 0; i < bag.size(); ++i)
                    image[bag[i]] = images[i];
                bool ok = std::all_of(checks[x].begin(), checks[x].end(), [&](const auto& rc) {
                    Tuple u;
                    for (int e : *rc.second)
                        u.push_back(image[e]);
                    return a.holds(rc.first, u);
                });
                if (ok)
                    next[images] += count;
                std::size_t f = 0;
                for (; f < fresh_pos.size(); ++f) {
                    if (++images[fresh_pos[f]] < a.size())
                        break;
                    images[fresh_pos[f]] = 0;
                }
                if (f == fresh_pos.size())
                    break;
            }
        }
        table = std::move(next);
        prev = bag;
    }
    BigCount total = 0;
    for (auto& [key, count] : table)
        total += count;
    return total;
}

auto hom_vector(const std::vector<PwStructure>& tests, const Structure& a) -> HomVector
{
    HomVector out;
    for (auto& t : tests)
        out[t.id] = hom_count_pd(t.structure, t.pd, a);
    return out;
}

auto lovasz_equiv(const Structure& a, const Structure& b, int k, int max_size, std::uint64_t budget) -> LovaszVerdict
{
    if (a.signature() != b.signature())
        throw StructureError("structures have different signatures");
    LovaszVerdict v;
    v.k = k;
    v.max_size = max_size;
    for (auto& t : enumerate_pw_structures(a.signature(), k, max_size, budget)) {
        auto in_a = hom_count_pd(t.structure, t.pd, a);
        auto in_b = hom_count_pd(t.structure, t.pd, b);
        if (in_a != in_b && v.equivalent) {
            v.equivalent = false;
            v.distinguishing = t;
            v.count_a = in_a;
            v.count_b = in_b;
        }
        v.entries.push_back({ t.id, std::move(in_a), std::move(in_b) });
    }
    return v;
}

auto format_hom_vectors(const LovaszVerdict& v) -> std::string
{
    std::ostringstream out;
    for (auto& e : v.entries)
        out << e.id << '\t' << e.in_a << '\t' << e.in_b << '\n';
    return out.str();
}

} // namespace pebblepath
