#include "pebblepath/structure.hpp"

#include <algorithm>
#include <numeric>

namespace pebblepath {

namespace {
    auto sorted_unique(std::vector<RelationSymbol> symbols) -> std::vector<RelationSymbol>
    {
        std::sort(symbols.begin(), symbols.end(),
            [](const auto& x, const auto& y) { return x.name < y.name; });
        for (std::size_t i = 0; i + 1 < symbols.size(); ++i)
            if (symbols[i].name == symbols[i + 1].name)
                throw StructureError("duplicate relation symbol '" + symbols[i].name + "'");
        for (auto& s : symbols)
            if (s.arity < 0)
                throw StructureError("negative arity for '" + s.name + "'");
        return symbols;
    }

    constexpr std::size_t dense_limit = 1u << 20;
}

Signature::Signature(std::initializer_list<RelationSymbol> symbols) :
    symbols_(sorted_unique(std::vector<RelationSymbol>(symbols)))
{
}

Signature::Signature(std::vector<RelationSymbol> symbols) :
    symbols_(sorted_unique(std::move(symbols)))
{
}

auto Signature::index_of(const std::string& name) const -> std::optional<int>
{
    auto it = std::lower_bound(symbols_.begin(), symbols_.end(), name,
        [](const RelationSymbol& s, const std::string& n) { return s.name < n; });
    if (it == symbols_.end() || it->name != name)
        return std::nullopt;
    return static_cast<int>(it - symbols_.begin());
}

auto Signature::max_arity() const -> int
{
    int m = 0;
    for (auto& s : symbols_)
        m = std::max(m, s.arity);
    return m;
}

auto Signature::with(RelationSymbol extra) const -> Signature
{
    auto s = symbols_;
    s.push_back(std::move(extra));
    return Signature(std::move(s));
}

auto Signature::without(const std::string& name) const -> Signature
{
    auto s = symbols_;
    std::erase_if(s, [&](const RelationSymbol& r) { return r.name == name; });
    return Signature(std::move(s));
}

auto TupleHash::operator()(const Tuple& t) const noexcept -> std::size_t
{
    std::size_t seed = t.size();
    for (int v : t)
        seed ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
}

Relation::Relation(int universe, int arity) :
    universe_(universe), arity_(arity)
{
    std::size_t cells = 1;
    bool small = true;
    for (int i = 0; i < arity && small; ++i) {
        if (universe != 0 && cells > dense_limit / static_cast<std::size_t>(std::max(universe, 1)))
            small = false;
        cells *= static_cast<std::size_t>(std::max(universe, 1));
    }
    if (small && cells <= dense_limit) {
        use_dense_ = true;
        dense_.assign(cells, false);
    }
}

auto Relation::dense_key(std::span<const int> t) const -> std::size_t
{
    std::size_t key = 0;
    for (int v : t)
        key = key * static_cast<std::size_t>(universe_) + static_cast<std::size_t>(v);
    return key;
}

auto Relation::contains(std::span<const int> t) const -> bool
{
    if (use_dense_)
        return dense_[dense_key(t)];
    return sparse_.contains(Tuple(t.begin(), t.end()));
}

auto Relation::insert(const Tuple& t) -> bool
{
    if (use_dense_) {
        auto key = dense_key(t);
        if (dense_[key])
            return false;
        dense_[key] = true;
    }
    else if (! sparse_.insert(t).second)
        return false;
    tuples_.push_back(t);
    return true;
}

auto Relation::sort() -> void
{
    std::sort(tuples_.begin(), tuples_.end());
}

Structure::Structure(Signature sig, int size) :
    sig_(std::move(sig)), size_(size)
{
    if (size < 0)
        throw StructureError("negative universe size");
    for (auto& s : sig_.symbols())
        relations_.emplace_back(size_, s.arity);
}

Structure::Structure(Signature sig, int size, const std::vector<std::vector<Tuple>>& relations) :
    Structure(sig, size)
{
    validate_structure(sig_, size, relations);
    for (int r = 0; r < sig_.size(); ++r) {
        for (auto& t : relations[r])
            relations_[r].insert(t);
        relations_[r].sort();
    }
}

auto Structure::tuples(const std::string& name) const -> const std::vector<Tuple>&
{
    auto r = sig_.index_of(name);
    if (! r)
        throw StructureError("unknown relation '" + name + "'");
    return tuples(*r);
}

auto Structure::tuple_count() const -> std::size_t
{
    std::size_t c = 0;
    for (auto& r : relations_)
        c += r.size();
    return c;
}

auto Structure::add_tuple(int rel, const Tuple& t) -> void
{
    if (rel < 0 || rel >= sig_.size())
        throw StructureError("relation index out of range");
    auto& sym = sig_.symbol(rel);
    if (static_cast<int>(t.size()) != sym.arity)
        throw StructureError("arity mismatch for '" + sym.name + "'");
    for (int v : t)
        if (v < 0 || v >= size_)
            throw StructureError("element " + std::to_string(v) + " out of range in '" + sym.name + "'");
    auto& r = relations_[rel];
    if (! r.insert(t))
        throw StructureError("duplicate tuple in '" + sym.name + "'");
    // keep tuples sorted; appends in order are the common case
    auto& ts = r.tuples();
    if (ts.size() >= 2 && ts[ts.size() - 2] > ts.back())
        r.sort();
}

auto Structure::add_tuple(const std::string& rel, const Tuple& t) -> void
{
    auto r = sig_.index_of(rel);
    if (! r)
        throw StructureError("unknown relation '" + rel + "'");
    add_tuple(*r, t);
}

auto Structure::element_name(int e) const -> std::string
{
    if (e >= 0 && e < static_cast<int>(names_.size()))
        return names_[e];
    return std::to_string(e);
}

auto Structure::set_names(std::vector<std::string> names) -> void
{
    if (static_cast<int>(names.size()) != size_)
        throw StructureError("name list does not match universe size");
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw StructureError("duplicate element name");
    names_ = std::move(names);
}

auto Structure::find_element(const std::string& name) const -> std::optional<int>
{
    if (! names_.empty()) {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end())
            return std::nullopt;
        return static_cast<int>(it - names_.begin());
    }
    try {
        std::size_t used = 0;
        int v = std::stoi(name, &used);
        if (used == name.size() && v >= 0 && v < size_)
            return v;
    }
    catch (const std::exception&) {
    }
    return std::nullopt;
}

auto Structure::operator==(const Structure& other) const -> bool
{
    if (sig_ != other.sig_ || size_ != other.size_)
        return false;
    for (int r = 0; r < sig_.size(); ++r)
        if (tuples(r) != other.tuples(r))
            return false;
    return true;
}

auto validate_structure(const Signature& sig, int size, const std::vector<std::vector<Tuple>>& relations) -> void
{
    if (size < 0)
        throw StructureError("negative universe size");
    if (static_cast<int>(relations.size()) != sig.size())
        throw StructureError("relation count does not match signature");
    for (int r = 0; r < sig.size(); ++r) {
        auto& sym = sig.symbol(r);
        std::unordered_set<Tuple, TupleHash> seen;
        for (auto& t : relations[r]) {
            if (static_cast<int>(t.size()) != sym.arity)
                throw StructureError("arity mismatch for '" + sym.name + "'");
            for (int v : t)
                if (v < 0 || v >= size)
                    throw StructureError("element " + std::to_string(v) + " out of range in '" + sym.name + "'");
            if (! seen.insert(t).second)
                throw StructureError("duplicate tuple in '" + sym.name + "'");
        }
    }
}

GaifmanGraph::GaifmanGraph(const Structure& s) :
    n_(s.size()), adj_(static_cast<std::size_t>(n_) * n_, false), nbrs_(n_)
{
    for (int r = 0; r < s.signature().size(); ++r)
        for (auto& t : s.tuples(r))
            for (int x : t)
                for (int y : t)
                    if (x != y)
                        adj_[x * n_ + y] = true;
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            if (adj_[a * n_ + b])
                nbrs_[a].push_back(b);
}

auto GaifmanGraph::edges() const -> std::vector<std::pair<int, int>>
{
    std::vector<std::pair<int, int>> result;
    for (int a = 0; a < n_; ++a)
        for (int b : nbrs_[a])
            if (a < b)
                result.emplace_back(a, b);
    return result;
}

auto GaifmanGraph::components() const -> std::vector<std::vector<int>>
{
    std::vector<int> comp(n_, -1);
    std::vector<std::vector<int>> result;
    for (int start = 0; start < n_; ++start) {
        if (comp[start] != -1)
            continue;
        int id = static_cast<int>(result.size());
        result.emplace_back();
        std::vector<int> stack{ start };
        comp[start] = id;
        while (! stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            result[id].push_back(v);
            for (int w : nbrs_[v])
                if (comp[w] == -1) {
                    comp[w] = id;
                    stack.push_back(w);
                }
        }
        std::sort(result[id].begin(), result[id].end());
    }
    return result;
}

auto gaifman(const Structure& s) -> GaifmanGraph
{
    return GaifmanGraph(s);
}

auto induced_substructure(const Structure& s, std::vector<int> subset) -> Substructure
{
    std::sort(subset.begin(), subset.end());
    subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
    std::vector<int> renumber(s.size(), -1);
    for (std::size_t i = 0; i < subset.size(); ++i) {
        if (subset[i] < 0 || subset[i] >= s.size())
            throw StructureError("subset element out of range");
        renumber[subset[i]] = static_cast<int>(i);
    }
    Structure result(s.signature(), static_cast<int>(subset.size()));
    for (int r = 0; r < s.signature().size(); ++r)
        for (auto& t : s.tuples(r)) {
            Tuple u;
            for (int v : t) {
                if (renumber[v] < 0)
                    break;
                u.push_back(renumber[v]);
            }
            if (u.size() == t.size())
                result.add_tuple(r, u);
        }
    if (! s.names().empty()) {
        std::vector<std::string> names;
        for (int v : subset)
            names.push_back(s.element_name(v));
        result.set_names(std::move(names));
    }
    return { std::move(result), std::move(subset) };
}

auto is_partial_hom(const Structure& a, const Structure& b, const PartialMap& g, MapMode mode) -> bool
{
    if (a.signature() != b.signature())
        throw StructureError("signature mismatch");
    std::vector<std::vector<int>> images(a.size());
    for (auto [x, y] : g) {
        if (x < 0 || x >= a.size() || y < 0 || y >= b.size())
            throw StructureError("partial map element out of range");
        auto& im = images[x];
        if (std::find(im.begin(), im.end(), y) == im.end())
            im.push_back(y);
        if (mode == MapMode::function && im.size() > 1)
            return false;
    }
    Tuple image;
    for (int r = 0; r < a.signature().size(); ++r) {
        for (auto& t : a.tuples(r)) {
            if (std::any_of(t.begin(), t.end(), [&](int v) { return images[v].empty(); }))
                continue;
            // odometer over all image choices
            std::vector<std::size_t> pick(t.size(), 0);
            image.assign(t.size(), 0);
            while (true) {
                for (std::size_t i = 0; i < t.size(); ++i)
                    image[i] = images[t[i]][pick[i]];
                if (! b.holds(r, image))
                    return false;
                std::size_t i = 0;
                while (i < t.size() && ++pick[i] == images[t[i]].size())
                    pick[i++] = 0;
                if (i == t.size())
                    break;
            }
        }
    }
    return true;
}

auto is_homomorphism(const Structure& a, const Structure& b, std::span<const int> h) -> bool
{
    if (a.signature() != b.signature())
        throw StructureError("signature mismatch");
    if (static_cast<int>(h.size()) != a.size())
        return false;
    for (int v : h)
        if (v < 0 || v >= b.size())
            return false;
    Tuple image;
    for (int r = 0; r < a.signature().size(); ++r)
        for (auto& t : a.tuples(r)) {
            image.clear();
            for (int v : t)
                image.push_back(h[v]);
            if (! b.holds(r, image))
                return false;
        }
    return true;
}

namespace {
    // Tuples grouped by their largest element so each is checked exactly once
    // during left-to-right assignment.
    struct Checks {
        std::vector<std::vector<std::pair<int, const Tuple*>>> at;
        std::vector<std::pair<int, const Tuple*>> nullary;
    };

    auto make_checks(const Structure& a) -> Checks
    {
        Checks c;
        c.at.resize(a.size());
        for (int r = 0; r < a.signature().size(); ++r)
            for (auto& t : a.tuples(r)) {
                if (t.empty())
                    c.nullary.emplace_back(r, &t);
                else
                    c.at[*std::max_element(t.begin(), t.end())].emplace_back(r, &t);
            }
        return c;
    }

    template <typename Visit>
    auto search_homs(const Structure& a, const Structure& b, Visit&& visit) -> void
    {
        if (a.signature() != b.signature())
            throw StructureError("signature mismatch");
        auto checks = make_checks(a);
        for (auto& [r, t] : checks.nullary)
            if (! b.holds(r, *t))
                return;
        int n = a.size();
        std::vector<int> h(n, -1);
        Tuple image;
        auto ok_at = [&](int v) {
            for (auto& [r, t] : checks.at[v]) {
                image.clear();
                for (int x : *t)
                    image.push_back(h[x]);
                if (! b.holds(r, image))
                    return false;
            }
            return true;
        };
        // iterative depth-first search to avoid deep recursion
        int depth = 0;
        if (n == 0) {
            visit(h);
            return;
        }
        while (depth >= 0) {
            if (depth == n) {
                if (! visit(h))
                    return;
                --depth;
                continue;
            }
            ++h[depth];
            if (h[depth] >= b.size()) {
                h[depth] = -1;
                --depth;
                continue;
            }
            if (ok_at(depth))
                ++depth;
        }
    }
}

auto enumerate_homs(const Structure& a, const Structure& b, const HomVisitor& visit) -> void
{
    search_homs(a, b, [&](const std::vector<int>& h) { return visit(h); });
}

auto count_homs_bruteforce(const Structure& a, const Structure& b) -> BigCount
{
    BigCount count = 0;
    search_homs(a, b, [&](const std::vector<int>&) { ++count; return true; });
    return count;
}

auto find_homomorphism(const Structure& a, const Structure& b) -> std::optional<std::vector<int>>
{
    std::optional<std::vector<int>> found;
    search_homs(a, b, [&](const std::vector<int>& h) { found = h; return false; });
    return found;
}

auto is_isomorphism(const Structure& a, const Structure& b, std::span<const int> f) -> bool
{
    if (a.signature() != b.signature() || a.size() != b.size())
        return false;
    if (static_cast<int>(f.size()) != a.size())
        return false;
    std::vector<bool> hit(b.size(), false);
    for (int v : f) {
        if (v < 0 || v >= b.size() || hit[v])
            return false;
        hit[v] = true;
    }
    for (int r = 0; r < a.signature().size(); ++r)
        if (a.tuples(r).size() != b.tuples(r).size())
            return false;
    return is_homomorphism(a, b, f);
}

auto find_isomorphism(const Structure& a, const Structure& b) -> std::optional<std::vector<int>>
{
    if (a.signature() != b.signature() || a.size() != b.size())
        return std::nullopt;
    for (int r = 0; r < a.signature().size(); ++r)
        if (a.tuples(r).size() != b.tuples(r).size())
            return std::nullopt;
    std::optional<std::vector<int>> found;
    search_homs(a, b, [&](const std::vector<int>& h) {
        if (is_isomorphism(a, b, h)) {
            found = h;
            return false;
        }
        return true;
    });
    return found;
}

auto canonical_form(const Structure& s) -> std::vector<std::vector<Tuple>>
{
    if (s.size() > 9)
        throw BudgetExceeded("canonical_form is limited to 9 elements");
    std::vector<int> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<Tuple>> best;
    bool first = true;
    do {
        std::vector<std::vector<Tuple>> form(s.signature().size());
        for (int r = 0; r < s.signature().size(); ++r) {
            for (auto& t : s.tuples(r)) {
                Tuple u;
                for (int v : t)
                    u.push_back(perm[v]);
                form[r].push_back(std::move(u));
            }
            std::sort(form[r].begin(), form[r].end());
        }
        if (first || form < best) {
            best = std::move(form);
            first = false;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

auto j_expand(const Structure& a) -> Structure
{
    if (a.signature().index_of(identity_symbol))
        throw StructureError("signature already contains the identity symbol");
    Structure result(a.signature().with({ identity_symbol, 2 }), a.size());
    for (int r = 0; r < a.signature().size(); ++r) {
        auto target = *result.signature().index_of(a.signature().symbol(r).name);
        for (auto& t : a.tuples(r))
            result.add_tuple(target, t);
    }
    for (int x = 0; x < a.size(); ++x)
        result.add_tuple(identity_symbol, { x, x });
    if (! a.names().empty())
        result.set_names(a.names());
    return result;
}

auto i_quotient(const Structure& b) -> Quotient
{
    auto id = b.signature().index_of(identity_symbol);
    if (! id)
        throw StructureError("signature lacks the identity symbol");
    std::vector<int> parent(b.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& t : b.tuples(*id)) {
        int x = find(t[0]), y = find(t[1]);
        if (x != y)
            parent[std::max(x, y)] = std::min(x, y);
    }
    std::vector<int> cls(b.size(), -1), rep_to_class(b.size(), -1);
    int classes = 0;
    for (int x = 0; x < b.size(); ++x) {
        int rep = find(x);
        if (rep_to_class[rep] == -1)
            rep_to_class[rep] = classes++;
        cls[x] = rep_to_class[rep];
    }
    auto sig = b.signature().without(identity_symbol);
    Structure result(sig, classes);
    for (int r = 0; r < sig.size(); ++r) {
        auto src = *b.signature().index_of(sig.symbol(r).name);
        for (auto& t : b.tuples(src)) {
            Tuple u;
            for (int v : t)
                u.push_back(cls[v]);
            if (! result.holds(r, u))
                result.add_tuple(r, u);
        }
    }
    return { std::move(result), std::move(cls) };
}

auto reduct(const Structure& s, const Signature& sig) -> Structure
{
    Structure result(sig, s.size());
    for (int r = 0; r < sig.size(); ++r) {
        auto src = s.signature().index_of(sig.symbol(r).name);
        if (! src || s.signature().arity(*src) != sig.arity(r))
            throw StructureError("reduct symbol '" + sig.symbol(r).name + "' not in signature");
        for (auto& t : s.tuples(*src))
            result.add_tuple(r, t);
    }
    if (! s.names().empty())
        result.set_names(s.names());
    return result;
}

namespace graphs {
    auto edge_signature() -> Signature
    {
        return Signature{ { "E", 2 } };
    }

    auto directed(int n, const std::vector<std::pair<int, int>>& edges) -> Structure
    {
        Structure s(edge_signature(), n);
        for (auto [x, y] : edges)
            if (! s.holds(0, Tuple{ x, y }))
                s.add_tuple(0, { x, y });
        return s;
    }

    auto undirected(int n, const std::vector<std::pair<int, int>>& edges) -> Structure
    {
        std::vector<std::pair<int, int>> both;
        for (auto [x, y] : edges) {
            both.emplace_back(x, y);
            both.emplace_back(y, x);
        }
        return directed(n, both);
    }

    auto path(int n) -> Structure
    {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i + 1 < n; ++i)
            e.emplace_back(i, i + 1);
        return undirected(n, e);
    }

    auto cycle(int n) -> Structure
    {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < n; ++i)
            e.emplace_back(i, (i + 1) % n);
        return undirected(n, e);
    }

    auto clique(int n) -> Structure
    {
        std::vector<std::pair<int, int>> e;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                e.emplace_back(i, j);
        return undirected(n, e);
    }

    auto edgeless(int n) -> Structure
    {
        return Structure(edge_signature(), n);
    }
}

} // namespace pebblepath
