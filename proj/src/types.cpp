#include "pebblepath/logic.hpp"

#include <algorithm>
#include <map>

namespace pebblepath {

namespace {
    // Tuples of length 0..k over one universe, numbered by length then
    // lexicographically.
    class TupleSpace {
    public:
        TupleSpace(int universe, int k, std::uint64_t budget) : n_(universe), k_(k)
        {
            std::uint64_t count = 1, total = 0;
            for (int j = 0; j <= k; ++j) {
                offset_.push_back(total);
                total += count;
                if (total > budget)
                    throw BudgetExceeded("type refinement over " + std::to_string(total) + " tuples exceeds the budget");
                count *= static_cast<std::uint64_t>(universe);
            }
            offset_.push_back(total);
        }

        auto size() const -> std::size_t { return offset_.back(); }

        auto id(const Tuple& t) const -> std::size_t
        {
            std::size_t r = 0;
            for (int x : t)
                r = r * n_ + x;
            return offset_[t.size()] + r;
        }

        auto at(std::size_t id) const -> Tuple
        {
            int len = static_cast<int>(std::upper_bound(offset_.begin(), offset_.end(), id) - offset_.begin()) - 1;
            auto r = id - offset_[len];
            Tuple t(len);
            for (int i = len; i-- > 0; r /= n_)
                t[i] = static_cast<int>(r % n_);
            return t;
        }

        auto k() const -> int { return k_; }

    private:
        int n_, k_;
        std::vector<std::uint64_t> offset_;
    };

    auto atomic_signature(const Structure& s, const Tuple& t) -> std::vector<int>
    {
        std::vector<int> out{ static_cast<int>(t.size()) };
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i + 1; j < t.size(); ++j)
                out.push_back(t[i] == t[j]);
        Tuple probe;
        for (int r = 0; r < s.signature().size(); ++r) {
            int ar = s.signature().arity(r);
            if (ar > 0 && t.empty())
                continue;
            std::vector<std::size_t> pos(ar, 0);
            while (true) {
                probe.clear();
                for (auto p : pos)
                    probe.push_back(t[p]);
                out.push_back(s.holds(r, probe));
                int i = 0;
                while (i < ar && ++pos[i] == t.size())
                    pos[i++] = 0;
                if (i == ar)
                    break;
            }
        }
        return out;
    }

    class Interner {
    public:
        auto operator()(const std::vector<int>& key) -> int
        {
            return ids_.emplace(key, static_cast<int>(ids_.size())).first->second;
        }

    private:
        std::map<std::vector<int>, int> ids_;
    };

    // Rank r+1 type ids from rank r ids; keys lead with the atomic type.
    auto refine_step(const Structure& s, const TupleSpace& space, const std::vector<int>& atomic,
        const std::vector<int>& types, Interner& intern) -> std::vector<int>
    {
        const int k = space.k();
        const int n = s.size();
        std::vector<int> next(space.size());
        for (std::size_t id = 0; id < space.size(); ++id) {
            auto t = space.at(id);
            std::vector<int> key{ atomic[id] };
            auto slot = [&](auto&& extend) {
                std::vector<int> ms;
                for (int c = 0; c < n; ++c)
                    ms.push_back(types[space.id(extend(c))]);
                std::sort(ms.begin(), ms.end());
                key.push_back(-1);
                key.insert(key.end(), ms.begin(), ms.end());
            };
            if (static_cast<int>(t.size()) < k) {
                slot([&](int c) {
                    auto u = t;
                    u.push_back(c);
                    return u;
                });
            } else {
                for (int l = 0; l < k; ++l)
                    slot([&](int c) {
                        auto u = t;
                        u[l] = c;
                        return u;
                    });
            }
            next[id] = intern(key);
        }
        return next;
    }

    auto class_count(const std::vector<int>& xs, const std::vector<int>& ys) -> std::size_t
    {
        std::vector<int> all(xs);
        all.insert(all.end(), ys.begin(), ys.end());
        std::sort(all.begin(), all.end());
        return static_cast<std::size_t>(std::unique(all.begin(), all.end()) - all.begin());
    }
}

auto refine_types(const Structure& a, const Structure& b, int k, int ranks, std::uint64_t budget) -> TypeReport
{
    if (a.signature() != b.signature())
        throw LogicError("structures have different signatures");
    if (k < 0 || ranks < 0)
        throw LogicError("negative width or rank");
    TupleSpace space_a(a.size(), k, budget), space_b(b.size(), k, budget);
    std::vector<int> atomic_a(space_a.size()), atomic_b(space_b.size());
    Interner intern;
    for (std::size_t id = 0; id < space_a.size(); ++id)
        atomic_a[id] = intern(atomic_signature(a, space_a.at(id)));
    for (std::size_t id = 0; id < space_b.size(); ++id)
        atomic_b[id] = intern(atomic_signature(b, space_b.at(id)));
    auto types_a = atomic_a, types_b = atomic_b;

    TypeReport report;
    // the empty tuple has id 0 on both sides
    if (types_a[0] != types_b[0])
        report.distinguished_at = 0;
    auto classes = class_count(types_a, types_b);
    for (int r = 1; r <= ranks && ! report.distinguished_at; ++r) {
        Interner step;
        types_a = refine_step(a, space_a, atomic_a, types_a, step);
        types_b = refine_step(b, space_b, atomic_b, types_b, step);
        if (types_a[0] != types_b[0])
            report.distinguished_at = r;
        auto now = class_count(types_a, types_b);
        if (now == classes) {
            report.stable_at = r - 1;
            break;
        }
        classes = now;
    }
    report.equivalent = ! report.distinguished_at;
    return report;
}

auto equiv_by_types(const Structure& a, const Structure& b, int k, int n) -> bool
{
    return refine_types(a, b, k, n).equivalent;
}

auto equiv_by_stable_types(const Structure& a, const Structure& b, int k) -> TypeReport
{
    auto bound = static_cast<int>(std::min<std::uint64_t>(TupleSpace(a.size(), k, default_type_budget).size()
            + TupleSpace(b.size(), k, default_type_budget).size(),
        1'000'000));
    return refine_types(a, b, k, bound + 1);
}

} // namespace pebblepath
