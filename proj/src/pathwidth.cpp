#include "pebblepath/decomposition.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace pebblepath {

namespace {
    struct Component {
        std::vector<int> elements;          // local index -> element
        std::vector<std::uint64_t> nbrs;    // local adjacency masks, no self loops
    };

    auto local_components(const Structure& a) -> std::vector<Component>
    {
        auto g = gaifman(a);
        std::vector<Component> out;
        for (auto& comp : g.components()) {
            if (comp.size() > 64)
                throw BudgetExceeded("component of " + std::to_string(comp.size()) + " elements exceeds the 64-element search limit");
            Component c;
            c.elements = comp;
            std::vector<int> local(a.size(), -1);
            for (std::size_t i = 0; i < comp.size(); ++i)
                local[comp[i]] = static_cast<int>(i);
            c.nbrs.assign(comp.size(), 0);
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (int w : g.neighbours(comp[i]))
                    c.nbrs[i] |= std::uint64_t{ 1 } << local[w];
            out.push_back(std::move(c));
        }
        return out;
    }

    auto full_mask(std::size_t n) -> std::uint64_t
    {
        return n == 64 ? ~std::uint64_t{ 0 } : (std::uint64_t{ 1 } << n) - 1;
    }

    class LayoutSearch {
    public:
        LayoutSearch(const Component& c, std::uint64_t& budget) :
            c_(c), n_(c.elements.size()), full_(full_mask(n_)), budget_(budget)
        {
        }

        // Layout whose every prefix has at most `width` elements with a
        // neighbour outside the prefix, if one exists.
        auto run(int width) -> std::optional<std::vector<int>>
        {
            width_ = width;
            dead_.clear();
            order_.clear();
            if (extend(0))
                return order_;
            return std::nullopt;
        }

    private:
        auto boundary(std::uint64_t placed) const -> int
        {
            int count = 0;
            for (auto rest = placed; rest; rest &= rest - 1) {
                int v = std::countr_zero(rest);
                if (c_.nbrs[v] & ~placed)
                    ++count;
            }
            return count;
        }

        auto extend(std::uint64_t placed) -> bool
        {
            if (placed == full_)
                return true;
            if (dead_.contains(placed))
                return false;
            if (budget_-- == 0)
                throw BudgetExceeded("pathwidth search budget exhausted");
            std::vector<std::pair<int, int>> moves;
            for (auto rest = full_ & ~placed; rest; rest &= rest - 1) {
                int v = std::countr_zero(rest);
                auto next = placed | (std::uint64_t{ 1 } << v);
                int b = boundary(next);
                if (b <= width_)
                    moves.emplace_back(b, v);
            }
            std::sort(moves.begin(), moves.end());
            for (auto [b, v] : moves) {
                order_.push_back(v);
                if (extend(placed | (std::uint64_t{ 1 } << v)))
                    return true;
                order_.pop_back();
            }
            dead_.insert(placed);
            return false;
        }

        const Component& c_;
        std::size_t n_;
        std::uint64_t full_;
        std::uint64_t& budget_;
        int width_ = 0;
        std::unordered_set<std::uint64_t> dead_;
        std::vector<int> order_;
    };
}

auto pathwidth_exact(const Structure& a, std::uint64_t budget) -> PathwidthResult
{
    PathwidthResult result;
    for (auto& comp : local_components(a)) {
        LayoutSearch search(comp, budget);
        for (int w = 0;; ++w)
            if (auto order = search.run(w)) {
                result.width = std::max(result.width, w);
                for (int v : *order)
                    result.layout.push_back(comp.elements[v]);
                break;
            }
    }
    // bag i holds the i-th element plus earlier elements that still have a
    // neighbour at position i or later
    auto g = gaifman(a);
    std::vector<int> pos(a.size());
    for (std::size_t i = 0; i < result.layout.size(); ++i)
        pos[result.layout[i]] = static_cast<int>(i);
    std::vector<int> last(a.size());
    for (int v = 0; v < a.size(); ++v) {
        last[v] = pos[v];
        for (int w : g.neighbours(v))
            last[v] = std::max(last[v], pos[w]);
    }
    for (std::size_t i = 0; i < result.layout.size(); ++i) {
        std::vector<int> bag;
        for (std::size_t j = 0; j <= i; ++j)
            if (last[result.layout[j]] >= static_cast<int>(i))
                bag.push_back(result.layout[j]);
        std::sort(bag.begin(), bag.end());
        result.certificate.bags.push_back(std::move(bag));
    }
    return result;
}

namespace {
    // Places elements one at a time, tracking the pebble of every placed
    // element that still has an unplaced neighbour.  A new element may not
    // take a pebble held by such an element.
    class CoverSearch {
    public:
        CoverSearch(const Component& c, int k, std::uint64_t& budget) :
            c_(c), n_(c.elements.size()), full_(full_mask(n_)), k_(k), budget_(budget), pebble_(n_, 0)
        {
        }

        auto run() -> bool
        {
            order_.clear();
            return extend(0);
        }

        auto order() const -> const std::vector<int>& { return order_; }
        auto pebble(int v) const -> int { return pebble_[v]; }

    private:
        auto key(std::uint64_t placed) const -> std::vector<std::uint8_t>
        {
            std::vector<std::uint8_t> out(n_ + 8, 0);
            for (int i = 0; i < 8; ++i)
                out[i] = static_cast<std::uint8_t>(placed >> (8 * i));
            for (std::size_t v = 0; v < n_; ++v)
                if ((placed >> v & 1) && (c_.nbrs[v] & ~placed))
                    out[8 + v] = static_cast<std::uint8_t>(pebble_[v]);
            return out;
        }

        auto extend(std::uint64_t placed) -> bool
        {
            if (placed == full_)
                return true;
            auto state = key(placed);
            if (dead_.contains(state))
                return false;
            if (budget_-- == 0)
                throw BudgetExceeded("cover search budget exhausted");
            std::vector<bool> held(k_ + 1, false);
            for (std::size_t v = 0; v < n_; ++v)
                if ((placed >> v & 1) && (c_.nbrs[v] & ~placed))
                    held[pebble_[v]] = true;
            int free_pebble = 1;
            while (free_pebble <= k_ && held[free_pebble])
                ++free_pebble;
            if (free_pebble <= k_)
                for (auto rest = full_ & ~placed; rest; rest &= rest - 1) {
                    int v = std::countr_zero(rest);
                    // any free pebble is interchangeable with the least one
                    pebble_[v] = free_pebble;
                    order_.push_back(v);
                    if (extend(placed | (std::uint64_t{ 1 } << v)))
                        return true;
                    order_.pop_back();
                    pebble_[v] = 0;
                }
            dead_.insert(std::move(state));
            return false;
        }

        struct KeyHash {
            auto operator()(const std::vector<std::uint8_t>& v) const noexcept -> std::size_t
            {
                return std::hash<std::string_view>{}(std::string_view(reinterpret_cast<const char*>(v.data()), v.size()));
            }
        };

        const Component& c_;
        std::size_t n_;
        std::uint64_t full_;
        int k_;
        std::uint64_t& budget_;
        std::vector<int> pebble_;
        std::vector<int> order_;
        std::unordered_set<std::vector<std::uint8_t>, KeyHash> dead_;
    };
}

auto find_cover(const Structure& a, int k, std::uint64_t budget) -> std::optional<LinearForestCover>
{
    if (k < 1)
        return std::nullopt;
    LinearForestCover cover;
    cover.pebbling.assign(a.size(), 0);
    for (auto& comp : local_components(a)) {
        CoverSearch search(comp, k, budget);
        if (! search.run())
            return std::nullopt;
        std::vector<int> chain;
        for (int v : search.order()) {
            chain.push_back(comp.elements[v]);
            cover.pebbling[comp.elements[v]] = search.pebble(v);
        }
        cover.chains.push_back(std::move(chain));
    }
    if (auto v = validate_cover(a, cover, k))
        throw DecompositionError("cover search produced an invalid cover: " + v->clause + ": " + v->detail);
    return cover;
}

auto coalgebra_number(const Structure& a, std::uint64_t budget) -> CoalgebraNumber
{
    for (int k = 1;; ++k)
        if (auto cover = find_cover(a, k, budget)) {
            auto alpha = cover_to_coalgebra(a, *cover, k);
            if (auto v = validate_coalgebra(a, alpha))
                throw DecompositionError("constructed coalgebra is invalid: " + v->clause + ": " + v->detail);
            return { k, std::move(alpha) };
        }
}

} // namespace pebblepath
