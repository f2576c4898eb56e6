#include "pebblepath/comonad.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>

namespace pebblepath {

namespace {
    constexpr auto saturated = std::numeric_limits<std::uint64_t>::max();

    auto mul_sat(std::uint64_t x, std::uint64_t y) -> std::uint64_t
    {
        if (x != 0 && y > saturated / x)
            return saturated;
        return x * y;
    }

    auto add_sat(std::uint64_t x, std::uint64_t y) -> std::uint64_t
    {
        return x > saturated - y ? saturated : x + y;
    }
}

auto last_pebbled(const Play& s, int pebble) -> std::optional<int>
{
    for (auto it = s.rbegin(); it != s.rend(); ++it)
        if (it->pebble == pebble)
            return it->element;
    return std::nullopt;
}

auto active_elements(const Play& s) -> std::vector<int>
{
    std::set<int> seen_pebbles;
    std::set<int> result;
    for (auto it = s.rbegin(); it != s.rend(); ++it)
        if (seen_pebbles.insert(it->pebble).second)
            result.insert(it->element);
    return { result.begin(), result.end() };
}

auto pebble_active(const Play& s, int i, int upto) -> bool
{
    int p = s[i - 1].pebble;
    for (int j = i + 1; j <= upto; ++j)
        if (s[j - 1].pebble == p)
            return false;
    return true;
}

auto is_valid_play(const Play& s, int k, int universe) -> bool
{
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [&](const Move<int>& m) {
        return m.pebble >= 1 && m.pebble <= k && m.element >= 0 && m.element < universe;
    });
}

auto is_valid_indexed(const IndexedPlay& p, int k, int universe) -> bool
{
    return is_valid_play(p.seq, k, universe) && p.index >= 1 && p.index <= static_cast<int>(p.seq.size());
}

auto lifted_holds(const Structure& a, int rel, const std::vector<IndexedPlay>& args) -> bool
{
    if (static_cast<int>(args.size()) != a.signature().arity(rel))
        return false;
    if (args.empty())
        return a.holds(rel, Tuple{});
    int top = 0;
    for (auto& p : args) {
        if (p.seq != args.front().seq)
            return false;
        top = std::max(top, p.index);
    }
    Tuple image;
    for (auto& p : args) {
        if (! pebble_active(p.seq, p.index, top))
            return false;
        image.push_back(counit(p));
    }
    return a.holds(rel, image);
}

PlayIndex::PlayIndex(int k, int universe, int max_len) :
    k_(k), universe_(universe), max_len_(max_len),
    letters_(static_cast<std::uint64_t>(std::max(k, 0)) * static_cast<std::uint64_t>(std::max(universe, 0)))
{
    if (k < 1)
        throw StructureError("pebble count must be at least 1");
    if (max_len < 1)
        throw StructureError("play length bound must be at least 1");
    play_offset_.assign(max_len + 2, 0);
    point_offset_.assign(max_len + 2, 0);
    std::uint64_t power = 1;
    for (int len = 1; len <= max_len; ++len) {
        power = mul_sat(power, letters_);
        play_offset_[len + 1] = add_sat(play_offset_[len], power);
        point_offset_[len + 1] = add_sat(point_offset_[len], mul_sat(power, static_cast<std::uint64_t>(len)));
    }
}

auto PlayIndex::play_count() const -> std::uint64_t
{
    return play_offset_[max_len_ + 1];
}

auto PlayIndex::point_count() const -> std::uint64_t
{
    return point_offset_[max_len_ + 1];
}

auto PlayIndex::letter(const Move<int>& m) const -> std::uint64_t
{
    return static_cast<std::uint64_t>(m.pebble - 1) * universe_ + static_cast<std::uint64_t>(m.element);
}

auto PlayIndex::rank(const Play& s) const -> std::uint64_t
{
    std::uint64_t r = 0;
    for (auto& m : s)
        r = r * letters_ + letter(m);
    return r;
}

auto PlayIndex::unrank(int len, std::uint64_t r) const -> Play
{
    Play s(len);
    for (int j = len - 1; j >= 0; --j) {
        auto l = r % letters_;
        r /= letters_;
        s[j] = { static_cast<int>(l / universe_) + 1, static_cast<int>(l % universe_) };
    }
    return s;
}

auto PlayIndex::contains(const Play& s) const -> bool
{
    return static_cast<int>(s.size()) <= max_len_ && is_valid_play(s, k_, universe_);
}

auto PlayIndex::play_id(const Play& s) const -> std::uint64_t
{
    if (! contains(s))
        throw StructureError("play outside the indexed range");
    return play_offset_[s.size()] + rank(s);
}

auto PlayIndex::play_at(std::uint64_t id) const -> Play
{
    for (int len = 1; len <= max_len_; ++len)
        if (id < play_offset_[len + 1])
            return unrank(len, id - play_offset_[len]);
    throw StructureError("play id out of range");
}

auto PlayIndex::first_point(const Play& s) const -> std::uint64_t
{
    if (! contains(s))
        throw StructureError("play outside the indexed range");
    return point_offset_[s.size()] + rank(s) * s.size();
}

auto PlayIndex::point_id(const IndexedPlay& p) const -> std::uint64_t
{
    if (p.index < 1 || p.index > static_cast<int>(p.seq.size()))
        throw StructureError("play index out of range");
    return first_point(p.seq) + static_cast<std::uint64_t>(p.index - 1);
}

auto PlayIndex::point_at(std::uint64_t id) const -> IndexedPlay
{
    for (int len = 1; len <= max_len_; ++len)
        if (id < point_offset_[len + 1]) {
            auto local = id - point_offset_[len];
            return { unrank(len, local / len), static_cast<int>(local % len) + 1 };
        }
    throw StructureError("point id out of range");
}

namespace {
    // Odometer over index tuples in [1..len]^arity, lexicographic.
    template <typename Visit>
    auto for_index_tuples(int len, int arity, Visit&& visit) -> void
    {
        std::vector<int> idx(arity, 1);
        while (true) {
            visit(idx);
            int j = arity - 1;
            while (j >= 0 && ++idx[j] > len)
                idx[j--] = 1;
            if (j < 0)
                return;
        }
    }

    auto refuse(const char* what, std::uint64_t size, std::uint64_t budget) -> void
    {
        if (size > budget)
            throw BudgetExceeded(std::string(what) + " would have " +
                (size == saturated ? std::string("more than 2^64") : std::to_string(size)) +
                " elements, over the budget of " + std::to_string(budget));
    }
}

auto build_pr(const Structure& a, int k, int n, std::uint64_t budget) -> PRStructure
{
    PlayIndex index(k, a.size(), n);
    refuse("PR carrier", index.point_count(), budget);
    auto& sig = a.signature();
    std::vector<std::vector<Tuple>> rels(sig.size());
    for (int r = 0; r < sig.size(); ++r)
        if (sig.arity(r) == 0 && a.holds(r, Tuple{}))
            rels[r].push_back({});

    Tuple image;
    for (std::uint64_t id = 0; id < index.play_count(); ++id) {
        auto s = index.play_at(id);
        int len = static_cast<int>(s.size());
        auto base = index.first_point(s);
        for (int r = 0; r < sig.size(); ++r) {
            int arity = sig.arity(r);
            if (arity == 0 || a.tuples(r).empty())
                continue;
            for_index_tuples(len, arity, [&](const std::vector<int>& idx) {
                int top = *std::max_element(idx.begin(), idx.end());
                image.clear();
                for (int i : idx) {
                    if (! pebble_active(s, i, top))
                        return;
                    image.push_back(s[i - 1].element);
                }
                if (! a.holds(r, image))
                    return;
                Tuple t;
                for (int i : idx)
                    t.push_back(static_cast<int>(base + i - 1));
                rels[r].push_back(std::move(t));
            });
        }
    }
    return { index, Structure(sig, static_cast<int>(index.point_count()), rels) };
}

auto build_p(const Structure& a, int k, int n, std::uint64_t budget) -> PStructure
{
    PlayIndex index(k, a.size(), n);
    refuse("P universe", index.play_count(), budget);
    auto& sig = a.signature();
    std::vector<std::vector<Tuple>> rels(sig.size());
    for (int r = 0; r < sig.size(); ++r)
        if (sig.arity(r) == 0 && a.holds(r, Tuple{}))
            rels[r].push_back({});

    Tuple image;
    for (std::uint64_t id = 0; id < index.play_count(); ++id) {
        auto s = index.play_at(id);
        int len = static_cast<int>(s.size());
        // prefix ids of s, so tuples whose longest member is s itself
        std::vector<int> prefix_id(len + 1);
        for (int l = 1; l <= len; ++l)
            prefix_id[l] = static_cast<int>(index.play_id(Play(s.begin(), s.begin() + l)));
        for (int r = 0; r < sig.size(); ++r) {
            int arity = sig.arity(r);
            if (arity == 0 || a.tuples(r).empty())
                continue;
            for_index_tuples(len, arity, [&](const std::vector<int>& idx) {
                if (*std::max_element(idx.begin(), idx.end()) != len)
                    return;
                image.clear();
                for (int i : idx) {
                    if (! pebble_active(s, i, len))
                        return;
                    image.push_back(s[i - 1].element);
                }
                if (! a.holds(r, image))
                    return;
                Tuple t;
                for (int i : idx)
                    t.push_back(prefix_id[i]);
                rels[r].push_back(std::move(t));
            });
        }
    }
    return { index, Structure(sig, static_cast<int>(index.play_count()), rels) };
}

CoKleisliMap::CoKleisliMap(PlayIndex domain, std::vector<int> values) :
    domain_(std::move(domain)), values_(std::move(values))
{
    if (values_.size() != domain_.point_count())
        throw StructureError("coKleisli map is not total on the carrier");
}

auto counit_map(const PlayIndex& index) -> CoKleisliMap
{
    std::vector<int> values(index.point_count());
    for (std::uint64_t id = 0; id < values.size(); ++id)
        values[id] = counit(index.point_at(id));
    return { index, std::move(values) };
}

auto lift_map(const PlayIndex& index, const std::vector<int>& h) -> CoKleisliMap
{
    std::vector<int> values(index.point_count());
    for (std::uint64_t id = 0; id < values.size(); ++id)
        values[id] = h.at(counit(index.point_at(id)));
    return { index, std::move(values) };
}

auto coextension(const CoKleisliMap& f, const IndexedPlay& p) -> IndexedPlay
{
    IndexedPlay out{ {}, p.index };
    auto base = f.domain().first_point(p.seq);
    for (std::size_t j = 0; j < p.seq.size(); ++j)
        out.seq.push_back({ p.seq[j].pebble, f.at(base + j) });
    return out;
}

namespace {
    auto checked_name(const Structure& a, int e) -> std::string
    {
        auto name = a.element_name(e);
        if (name.find_first_of(":;@") != std::string::npos)
            throw StructureError("element name '" + name + "' contains a reserved character");
        return name;
    }
}

auto encode_play(const Play& s, const Structure& a) -> std::string
{
    std::string out;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j)
            out += ';';
        out += std::to_string(s[j].pebble) + ':' + checked_name(a, s[j].element);
    }
    return out;
}

auto encode_indexed(const IndexedPlay& p, const Structure& a) -> std::string
{
    return encode_play(p.seq, a) + '@' + std::to_string(p.index);
}

auto decode_play(const std::string& text, const Structure& a) -> Play
{
    Play s;
    if (text.empty())
        return s;
    std::size_t start = 0;
    while (true) {
        auto end = text.find(';', start);
        auto part = text.substr(start, end == std::string::npos ? std::string::npos : end - start);
        auto colon = part.find(':');
        if (colon == std::string::npos || colon == 0)
            throw StructureError("malformed placement '" + part + "'");
        int pebble = 0;
        try {
            std::size_t used = 0;
            pebble = std::stoi(part.substr(0, colon), &used);
            if (used != colon)
                throw StructureError("bad pebble");
        }
        catch (const std::exception&) {
            throw StructureError("malformed pebble in '" + part + "'");
        }
        auto e = a.find_element(part.substr(colon + 1));
        if (! e)
            throw StructureError("unknown element in '" + part + "'");
        s.push_back({ pebble, *e });
        if (end == std::string::npos)
            break;
        start = end + 1;
    }
    return s;
}

auto decode_indexed(const std::string& text, const Structure& a) -> IndexedPlay
{
    auto at = text.rfind('@');
    if (at == std::string::npos)
        throw StructureError("indexed play lacks '@'");
    IndexedPlay p{ decode_play(text.substr(0, at), a), 0 };
    try {
        std::size_t used = 0;
        p.index = std::stoi(text.substr(at + 1), &used);
        if (used != text.size() - at - 1)
            throw StructureError("bad index");
    }
    catch (const std::exception&) {
        throw StructureError("malformed index in '" + text + "'");
    }
    if (p.index < 1 || p.index > static_cast<int>(p.seq.size()))
        throw StructureError("index out of range in '" + text + "'");
    return p;
}

auto pr_as_named_structure(const PRStructure& pr, const Structure& a) -> Structure
{
    auto s = pr.structure;
    std::vector<std::string> names;
    names.reserve(s.size());
    for (int id = 0; id < s.size(); ++id)
        names.push_back(encode_indexed(pr.index.point_at(id), a));
    s.set_names(std::move(names));
    return s;
}

auto LawReport::passed() const -> bool
{
    return std::all_of(laws.begin(), laws.end(), [](const LawResult& r) { return r.failures == 0; });
}

auto LawReport::find(const std::string& name) const -> const LawResult*
{
    for (auto& l : laws)
        if (l.name == name)
            return &l;
    return nullptr;
}

namespace {
    auto show(const IndexedPlay& p) -> std::string
    {
        std::string out;
        for (std::size_t j = 0; j < p.seq.size(); ++j)
            out += (j ? ";" : "") + std::to_string(p.seq[j].pebble) + ":" + std::to_string(p.seq[j].element);
        return out + "@" + std::to_string(p.index);
    }

    auto record(LawResult& law, bool ok, const IndexedPlay& at) -> void
    {
        ++law.checked;
        if (! ok && law.failures++ == 0)
            law.counterexample = show(at);
    }
}

auto check_comonad_laws(const Structure& a, int k, int n, const LawOptions& options) -> LawReport
{
    PlayIndex index(k, a.size(), n);
    refuse("PR carrier", index.point_count(), options.budget);
    auto points = index.point_count();
    CoextensionFn coext = options.coextension ? options.coextension
                                              : CoextensionFn([](const CoKleisliMap& f, const IndexedPlay& p) { return coextension(f, p); });

    std::vector<IndexedPlay> carrier;
    carrier.reserve(points);
    for (std::uint64_t id = 0; id < points; ++id)
        carrier.push_back(index.point_at(id));

    std::vector<CoKleisliMap> probes;
    probes.push_back(counit_map(index));
    for (int c = 0; c < std::min(a.size(), 3); ++c)
        probes.emplace_back(index, std::vector<int>(points, c));
    std::mt19937_64 rng(options.seed);
    if (a.size() > 0)
        for (int r = 0; r < options.random_probes; ++r) {
            std::uniform_int_distribution<int> pick(0, a.size() - 1);
            std::vector<int> values(points);
            for (auto& v : values)
                v = pick(rng);
            probes.emplace_back(index, std::move(values));
        }

    LawReport report;
    report.seed = options.seed;
    LawResult coext_counit{ "coextension-of-counit" };
    LawResult counit_coext{ "counit-after-coextension" };
    LawResult composition{ "coextension-composition" };
    LawResult delta_pr_counit{ "delta-then-pr-counit" };
    LawResult delta_counit{ "delta-then-counit" };
    LawResult coassoc{ "delta-coassociativity" };
    LawResult prefix_counit{ "prefix-counit" };
    LawResult prefix_delta{ "prefix-comultiplication" };

    auto& eps = probes.front();
    for (auto& p : carrier)
        record(coext_counit, coext(eps, p) == p, p);

    for (auto& f : probes)
        for (std::uint64_t id = 0; id < points; ++id)
            record(counit_coext, counit(coext(f, carrier[id])) == f.at(id), carrier[id]);

    for (auto& f : probes) {
        std::vector<IndexedPlay> f_star;
        f_star.reserve(points);
        for (auto& p : carrier)
            f_star.push_back(coext(f, p));
        for (auto& g : probes) {
            std::vector<int> composite(points);
            for (std::uint64_t id = 0; id < points; ++id)
                composite[id] = g(f_star[id]);
            CoKleisliMap gf(index, std::move(composite));
            for (std::uint64_t id = 0; id < points; ++id)
                record(composition, coext(gf, carrier[id]) == coext(g, f_star[id]), carrier[id]);
        }
    }

    for (auto& p : carrier) {
        auto d = comultiply(p);
        record(delta_pr_counit, pr_map([](const IndexedPlay& q) { return counit(q); }, d) == p, p);
        record(delta_counit, counit(d) == p, p);
        record(coassoc, pr_map([](const IndexedPlay& q) { return comultiply(q); }, d) == comultiply(d), p);
        auto prefix = nu(p);
        record(prefix_counit, prefix.back().element == counit(p), p);
        auto lhs = nu(pr_map([](const IndexedPlay& q) { return nu(q); }, d));
        record(prefix_delta, lhs == prefix_comultiply(prefix), p);
    }

    report.laws = { coext_counit, counit_coext, composition, delta_pr_counit, delta_counit,
        coassoc, prefix_counit, prefix_delta };

    if (options.check_homomorphisms) {
        auto pr = build_pr(a, k, n, options.budget);
        auto p_struct = build_p(a, k, n, options.budget);
        LawResult counit_hom{ "counit-homomorphism" };
        LawResult prefix_hom{ "prefix-homomorphism" };
        std::vector<int> eps_table(points), nu_table(points);
        for (std::uint64_t id = 0; id < points; ++id) {
            eps_table[id] = counit(carrier[id]);
            nu_table[id] = static_cast<int>(p_struct.index.play_id(nu(carrier[id])));
        }
        Tuple image;
        for (int r = 0; r < a.signature().size(); ++r)
            for (auto& t : pr.structure.tuples(r)) {
                auto at = t.empty() ? IndexedPlay{} : carrier[t.front()];
                image.clear();
                for (int v : t)
                    image.push_back(eps_table[v]);
                record(counit_hom, a.holds(r, image), at);
                image.clear();
                for (int v : t)
                    image.push_back(nu_table[v]);
                record(prefix_hom, p_struct.structure.holds(r, image), at);
            }
        report.laws.push_back(counit_hom);
        report.laws.push_back(prefix_hom);
    }
    return report;
}

auto check_delta_naturality(const Structure& a, const Structure& b, const std::vector<int>& h, int k, int n) -> LawResult
{
    if (! is_homomorphism(a, b, h))
        throw StructureError("naturality probe is not a homomorphism");
    PlayIndex index(k, a.size(), n);
    LawResult law{ "delta-naturality" };
    auto apply = [&](int x) { return h[x]; };
    for (std::uint64_t id = 0; id < index.point_count(); ++id) {
        auto p = index.point_at(id);
        auto lhs = pr_map([&](const IndexedPlay& q) { return pr_map(apply, q); }, comultiply(p));
        auto rhs = comultiply(pr_map(apply, p));
        record(law, lhs == rhs, p);
    }
    return law;
}

} // namespace pebblepath
