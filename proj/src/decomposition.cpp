#include "pebblepath/decomposition.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace pebblepath {

namespace {
    auto fail(std::string clause, std::string detail) -> std::optional<Violation>
    {
        return Violation{ std::move(clause), std::move(detail) };
    }
}

auto validate_pd(const Structure& a, const PathDecomposition& pd) -> PdCheck
{
    PdCheck result;
    int n = a.size();
    std::vector<std::vector<int>> occurs(n);
    int largest = 0;
    for (std::size_t x = 0; x < pd.bags.size(); ++x) {
        auto& bag = pd.bags[x];
        std::set<int> seen;
        for (int e : bag) {
            if (e < 0 || e >= n) {
                result.violation = Violation{ "bag", "bag " + std::to_string(x) + " names element " + std::to_string(e) + " outside the universe" };
                return result;
            }
            if (! seen.insert(e).second) {
                result.violation = Violation{ "bag", "bag " + std::to_string(x) + " lists element " + std::to_string(e) + " twice" };
                return result;
            }
            occurs[e].push_back(static_cast<int>(x));
        }
        largest = std::max(largest, static_cast<int>(bag.size()));
    }
    for (int e = 0; e < n; ++e)
        if (occurs[e].empty()) {
            result.violation = Violation{ "PD1", "element " + std::to_string(e) + " is in no bag" };
            return result;
        }
    auto g = gaifman(a);
    for (auto [u, v] : g.edges()) {
        bool covered = std::any_of(pd.bags.begin(), pd.bags.end(), [&](const std::vector<int>& bag) {
            return std::find(bag.begin(), bag.end(), u) != bag.end() && std::find(bag.begin(), bag.end(), v) != bag.end();
        });
        if (! covered) {
            result.violation = Violation{ "PD2", "edge " + std::to_string(u) + "-" + std::to_string(v) + " lies in no bag" };
            return result;
        }
    }
    for (int e = 0; e < n; ++e) {
        auto& xs = occurs[e];
        if (xs.back() - xs.front() + 1 != static_cast<int>(xs.size())) {
            int gap = xs.front();
            while (std::find(xs.begin(), xs.end(), gap) != xs.end())
                ++gap;
            result.violation = Violation{ "PD3", "element " + std::to_string(e) + " is in bags " + std::to_string(xs.front()) +
                " and " + std::to_string(xs.back()) + " but not in bag " + std::to_string(gap) };
            return result;
        }
    }
    result.width = std::max(largest - 1, 0);
    return result;
}

auto validate_cover(const Structure& a, const LinearForestCover& c, int k) -> std::optional<Violation>
{
    int n = a.size();
    if (static_cast<int>(c.pebbling.size()) != n)
        return fail("partition", "pebbling has " + std::to_string(c.pebbling.size()) + " entries for " + std::to_string(n) + " elements");
    std::vector<int> chain_of(n, -1), pos(n, -1);
    for (std::size_t ci = 0; ci < c.chains.size(); ++ci)
        for (std::size_t j = 0; j < c.chains[ci].size(); ++j) {
            int e = c.chains[ci][j];
            if (e < 0 || e >= n)
                return fail("partition", "chain " + std::to_string(ci) + " names element " + std::to_string(e) + " outside the universe");
            if (chain_of[e] != -1)
                return fail("partition", "element " + std::to_string(e) + " appears in more than one chain position");
            chain_of[e] = static_cast<int>(ci);
            pos[e] = static_cast<int>(j);
        }
    for (int e = 0; e < n; ++e) {
        if (chain_of[e] == -1)
            return fail("partition", "element " + std::to_string(e) + " is in no chain");
        if (c.pebbling[e] < 1 || c.pebbling[e] > k)
            return fail("pebbling", "element " + std::to_string(e) + " has pebble " + std::to_string(c.pebbling[e]) + " outside 1.." + std::to_string(k));
    }
    auto g = gaifman(a);
    for (auto [u, v] : g.edges()) {
        if (chain_of[u] != chain_of[v])
            return fail("FC1", "edge " + std::to_string(u) + "-" + std::to_string(v) + " crosses chains");
        auto& chain = c.chains[chain_of[u]];
        int lo = std::min(pos[u], pos[v]), hi = std::max(pos[u], pos[v]);
        int first = chain[lo];
        for (int j = lo + 1; j <= hi; ++j)
            if (c.pebbling[chain[j]] == c.pebbling[first])
                return fail("FC2", "pebble " + std::to_string(c.pebbling[first]) + " of element " + std::to_string(first) +
                    " is reused by element " + std::to_string(chain[j]) + " before its neighbour " + std::to_string(chain[hi]));
    }
    return std::nullopt;
}

auto validate_coalgebra(const Structure& a, const Coalgebra& alpha) -> std::optional<Violation>
{
    int n = a.size();
    if (static_cast<int>(alpha.alpha.size()) != n)
        return fail("total", "structure map has " + std::to_string(alpha.alpha.size()) + " entries for " + std::to_string(n) + " elements");
    for (int x = 0; x < n; ++x)
        if (! is_valid_indexed(alpha.alpha[x], alpha.k, n))
            return fail("total", "image of element " + std::to_string(x) + " is not a play over " + std::to_string(alpha.k) + " pebbles");
    for (int x = 0; x < n; ++x)
        if (counit(alpha.alpha[x]) != x)
            return fail("counit", "counit of the image of element " + std::to_string(x) + " is " + std::to_string(counit(alpha.alpha[x])));
    auto lookup = [&](int e) { return alpha.alpha[e]; };
    for (int x = 0; x < n; ++x)
        if (comultiply(alpha.alpha[x]) != pr_map(lookup, alpha.alpha[x]))
            return fail("comultiplication", "element " + std::to_string(x) + " violates the comultiplication law");
    for (int r = 0; r < a.signature().size(); ++r)
        for (auto& t : a.tuples(r)) {
            std::vector<IndexedPlay> args;
            for (int e : t)
                args.push_back(alpha.alpha[e]);
            if (! lifted_holds(a, r, args)) {
                std::string tuple;
                for (int e : t)
                    tuple += (tuple.empty() ? "" : ",") + std::to_string(e);
                return fail("homomorphism", a.signature().symbol(r).name + "(" + tuple + ") is not preserved");
            }
        }
    return std::nullopt;
}

auto build_section_family(const Structure& a, const PathDecomposition& pd, int k) -> SectionFamily
{
    auto check = validate_pd(a, pd);
    if (! check)
        throw DecompositionError("invalid path decomposition: " + check.violation->clause + ": " + check.violation->detail);
    if (check.width >= k)
        throw DecompositionError("decomposition width " + std::to_string(check.width) + " is not below " + std::to_string(k));
    SectionFamily family;
    for (std::size_t x = 0; x < pd.bags.size(); ++x) {
        auto bag = pd.bags[x];
        std::sort(bag.begin(), bag.end());
        std::map<int, int> tau;
        std::vector<bool> used(k + 1, false);
        std::vector<int> fresh;
        for (int e : bag) {
            if (x > 0 && family.back().contains(e)) {
                tau[e] = family.back().at(e);
                used[tau[e]] = true;
            }
            else
                fresh.push_back(e);
        }
        int next = 1;
        for (int e : fresh) {
            while (used[next])
                ++next;
            tau[e] = next;
            used[next] = true;
        }
        family.push_back(std::move(tau));
    }
    return family;
}

auto pd_to_cover(const Structure& a, const PathDecomposition& pd, int k) -> LinearForestCover
{
    auto family = build_section_family(a, pd, k);
    int n = a.size();
    std::vector<int> first_bag(n, -1);
    LinearForestCover cover;
    cover.pebbling.assign(n, 0);
    for (std::size_t x = 0; x < family.size(); ++x)
        for (auto [e, p] : family[x])
            if (first_bag[e] == -1) {
                first_bag[e] = static_cast<int>(x);
                cover.pebbling[e] = p;
            }
    for (auto& comp : gaifman(a).components()) {
        auto chain = comp;
        std::sort(chain.begin(), chain.end(), [&](int u, int v) {
            return std::pair(first_bag[u], cover.pebbling[u]) < std::pair(first_bag[v], cover.pebbling[v]);
        });
        cover.chains.push_back(std::move(chain));
    }
    return cover;
}

auto cover_to_pd(const Structure& a, const LinearForestCover& c) -> PathDecomposition
{
    int k = c.pebbling.empty() ? 1 : *std::max_element(c.pebbling.begin(), c.pebbling.end());
    if (auto v = validate_cover(a, c, std::max(k, 1)))
        throw DecompositionError("invalid cover: " + v->clause + ": " + v->detail);
    std::vector<int> order;
    for (auto& chain : c.chains)
        order.insert(order.end(), chain.begin(), chain.end());
    PathDecomposition pd;
    for (std::size_t j = 0; j < order.size(); ++j) {
        std::vector<int> bag;
        for (std::size_t i = 0; i <= j; ++i) {
            bool active = true;
            for (std::size_t m = i + 1; m <= j && active; ++m)
                active = c.pebbling[order[m]] != c.pebbling[order[i]];
            if (active)
                bag.push_back(order[i]);
        }
        std::sort(bag.begin(), bag.end());
        pd.bags.push_back(std::move(bag));
    }
    return pd;
}

auto canonicalize_cover(const LinearForestCover& c) -> LinearForestCover
{
    LinearForestCover out;
    out.chains = c.chains;
    std::erase_if(out.chains, [](const std::vector<int>& ch) { return ch.empty(); });
    std::sort(out.chains.begin(), out.chains.end(), [](const auto& x, const auto& y) {
        return *std::min_element(x.begin(), x.end()) < *std::min_element(y.begin(), y.end());
    });
    std::map<int, int> rename;
    out.pebbling.assign(c.pebbling.size(), 0);
    for (auto& chain : out.chains)
        for (int e : chain) {
            auto [it, _] = rename.emplace(c.pebbling[e], static_cast<int>(rename.size()) + 1);
            out.pebbling[e] = it->second;
        }
    return out;
}

auto cover_to_coalgebra(const Structure& a, const LinearForestCover& c, int k) -> Coalgebra
{
    if (auto v = validate_cover(a, c, k))
        throw DecompositionError("invalid cover: " + v->clause + ": " + v->detail);
    Coalgebra out{ k, std::vector<IndexedPlay>(a.size()) };
    for (auto& chain : c.chains) {
        Play t;
        for (int e : chain)
            t.push_back({ c.pebbling[e], e });
        for (std::size_t j = 0; j < chain.size(); ++j)
            out.alpha[chain[j]] = { t, static_cast<int>(j + 1) };
    }
    return out;
}

auto coalgebra_to_cover(const Structure& a, const Coalgebra& alpha) -> LinearForestCover
{
    if (auto v = validate_coalgebra(a, alpha))
        throw DecompositionError("invalid coalgebra: " + v->clause + ": " + v->detail);
    std::map<Play, std::vector<std::pair<int, int>>> groups;
    LinearForestCover cover;
    cover.pebbling.assign(a.size(), 0);
    for (int x = 0; x < a.size(); ++x) {
        auto& p = alpha.alpha[x];
        groups[p.seq].emplace_back(p.index, x);
        cover.pebbling[x] = p.seq[p.index - 1].pebble;
    }
    for (auto& [_, members] : groups) {
        std::sort(members.begin(), members.end());
        std::vector<int> chain;
        for (auto [i, x] : members)
            chain.push_back(x);
        cover.chains.push_back(std::move(chain));
    }
    std::sort(cover.chains.begin(), cover.chains.end(), [](const auto& x, const auto& y) {
        return *std::min_element(x.begin(), x.end()) < *std::min_element(y.begin(), y.end());
    });
    return cover;
}

auto is_cover_morphism(const Structure& a, const LinearForestCover& ca,
    const Structure& b, const LinearForestCover& cb, const std::vector<int>& h) -> bool
{
    if (! is_homomorphism(a, b, h))
        return false;
    std::vector<int> chain_of(b.size(), -1), pos(b.size(), -1);
    for (std::size_t ci = 0; ci < cb.chains.size(); ++ci)
        for (std::size_t j = 0; j < cb.chains[ci].size(); ++j) {
            chain_of[cb.chains[ci][j]] = static_cast<int>(ci);
            pos[cb.chains[ci][j]] = static_cast<int>(j);
        }
    for (int x = 0; x < a.size(); ++x)
        if (ca.pebbling[x] != cb.pebbling[h[x]])
            return false;
    for (auto& chain : ca.chains)
        for (std::size_t j = 1; j < chain.size(); ++j) {
            int u = h[chain[j - 1]], v = h[chain[j]];
            if (chain_of[u] != chain_of[v] || pos[u] > pos[v])
                return false;
        }
    return true;
}

namespace {
    auto split_lines(const std::string& text) -> std::vector<std::string>
    {
        std::vector<std::string> lines;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (! line.empty() && line.back() == '\r')
                line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
                continue;
            lines.push_back(line);
        }
        return lines;
    }

    auto words(const std::string& line) -> std::vector<std::string>
    {
        std::istringstream in(line);
        std::vector<std::string> out;
        std::string w;
        while (in >> w)
            out.push_back(w);
        return out;
    }

    auto element(const Structure& a, const std::string& name) -> int
    {
        auto e = a.find_element(name);
        if (! e)
            throw DecompositionError("unknown element '" + name + "'");
        return *e;
    }
}

auto format_pd(const PathDecomposition& pd, const Structure& a) -> std::string
{
    std::string out;
    for (auto& bag : pd.bags) {
        out += "bag";
        for (int e : bag)
            out += " " + a.element_name(e);
        out += "\n";
    }
    return out;
}

auto parse_pd(const std::string& text, const Structure& a) -> PathDecomposition
{
    PathDecomposition pd;
    for (auto& line : split_lines(text)) {
        auto w = words(line);
        if (w.front() != "bag")
            throw DecompositionError("expected 'bag' line, got '" + line + "'");
        std::vector<int> bag;
        for (std::size_t i = 1; i < w.size(); ++i)
            bag.push_back(element(a, w[i]));
        pd.bags.push_back(std::move(bag));
    }
    return pd;
}

auto format_cover(const LinearForestCover& c, const Structure& a) -> std::string
{
    std::string out;
    for (auto& chain : c.chains) {
        out += "chain";
        for (int e : chain)
            out += " " + a.element_name(e) + ":" + std::to_string(c.pebbling.at(e));
        out += "\n";
    }
    return out;
}

auto parse_cover(const std::string& text, const Structure& a) -> LinearForestCover
{
    LinearForestCover c;
    c.pebbling.assign(a.size(), 0);
    for (auto& line : split_lines(text)) {
        auto w = words(line);
        if (w.front() != "chain")
            throw DecompositionError("expected 'chain' line, got '" + line + "'");
        std::vector<int> chain;
        for (std::size_t i = 1; i < w.size(); ++i) {
            auto colon = w[i].rfind(':');
            if (colon == std::string::npos)
                throw DecompositionError("expected element:pebble, got '" + w[i] + "'");
            int e = element(a, w[i].substr(0, colon));
            try {
                c.pebbling[e] = std::stoi(w[i].substr(colon + 1));
            }
            catch (const std::exception&) {
                throw DecompositionError("bad pebble in '" + w[i] + "'");
            }
            chain.push_back(e);
        }
        c.chains.push_back(std::move(chain));
    }
    return c;
}

auto format_coalgebra(const Coalgebra& alpha, const Structure& a) -> std::string
{
    std::string out = "k " + std::to_string(alpha.k) + "\n";
    for (int x = 0; x < static_cast<int>(alpha.alpha.size()); ++x)
        out += a.element_name(x) + " -> " + encode_indexed(alpha.alpha[x], a) + "\n";
    return out;
}

auto parse_coalgebra(const std::string& text, const Structure& a) -> Coalgebra
{
    Coalgebra alpha;
    alpha.alpha.assign(a.size(), IndexedPlay{});
    std::vector<bool> seen(a.size(), false);
    bool have_k = false;
    for (auto& line : split_lines(text)) {
        auto w = words(line);
        if (w.size() == 2 && w[0] == "k") {
            alpha.k = std::stoi(w[1]);
            have_k = true;
            continue;
        }
        if (w.size() != 3 || w[1] != "->")
            throw DecompositionError("expected 'element -> play@index', got '" + line + "'");
        int x = element(a, w[0]);
        alpha.alpha[x] = decode_indexed(w[2], a);
        seen[x] = true;
    }
    if (! have_k)
        throw DecompositionError("coalgebra text lacks a 'k' line");
    for (int x = 0; x < a.size(); ++x)
        if (! seen[x])
            throw DecompositionError("no image for element '" + a.element_name(x) + "'");
    return alpha;
}

} // namespace pebblepath
