#pragma once

#include "pebblepath/structure.hpp"

#include <set>
#include <vector>

namespace pebblepath::testing {

// Every digraph (loops allowed) on n vertices, in order of edge bitmask.
inline auto all_digraphs(int n) -> std::vector<Structure>
{
    std::vector<Structure> out;
    int cells = n * n;
    for (std::uint32_t mask = 0; mask < (1u << cells); ++mask) {
        std::vector<std::pair<int, int>> edges;
        for (int c = 0; c < cells; ++c)
            if (mask >> c & 1)
                edges.emplace_back(c / n, c % n);
        out.push_back(graphs::directed(n, edges));
    }
    return out;
}

// One digraph per isomorphism class, sizes 1..max_n.
inline auto digraph_classes(int max_n) -> std::vector<Structure>
{
    std::vector<Structure> out;
    for (int n = 1; n <= max_n; ++n) {
        std::set<std::vector<std::vector<Tuple>>> seen;
        for (auto& g : all_digraphs(n))
            if (seen.insert(canonical_form(g)).second)
                out.push_back(g);
    }
    return out;
}

inline auto disjoint_union(const Structure& x, const Structure& y) -> Structure
{
    Structure out(x.signature(), x.size() + y.size());
    for (int r = 0; r < x.signature().size(); ++r) {
        for (auto& t : x.tuples(r))
            out.add_tuple(r, t);
        for (auto t : y.tuples(r)) {
            for (auto& v : t)
                v += x.size();
            out.add_tuple(r, t);
        }
    }
    return out;
}

} // namespace pebblepath::testing
