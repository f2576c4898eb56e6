#include "pebblepath/bijective.hpp"

#include <algorithm>
#include <numeric>

namespace pebblepath {

namespace {
    // Equality pattern and every relation instance over positions of t.
    auto atomic_type(const Structure& s, const std::vector<int>& t) -> std::vector<bool>
    {
        std::vector<bool> out;
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

    class AnswerSearch {
    public:
        AnswerSearch(const Structure& a, const Structure& b, int k, const BijectiveWord& w) :
            a_(a), b_(b), k_(k), w_(w), hid_(w.hidden - 1), pos_a_(k, -1), pos_b_(k, -1)
        {
            images_.assign(w.moves.size(), -1);
        }

        auto run() -> std::optional<BijectiveAnswer>
        {
            if (extend(0))
                return BijectiveAnswer{ images_, bijection_ };
            return std::nullopt;
        }

    private:
        auto visible(const std::vector<int>& pos) const -> std::vector<int>
        {
            std::vector<int> out;
            for (int q = 0; q < k_; ++q)
                if (pos[q] >= 0 && q != hidden_slot_)
                    out.push_back(pos[q]);
            return out;
        }

        // Multisets of per-element type sequences over the hidden window
        // must coincide; matched classes give the bijection.
        auto close_window() -> bool
        {
            auto signatures = [&](const Structure& s, const std::vector<std::vector<int>>& window) {
                std::vector<std::vector<std::vector<bool>>> out(s.size());
                for (int x = 0; x < s.size(); ++x)
                    for (auto t : window) {
                        t.push_back(x);
                        out[x].push_back(atomic_type(s, t));
                    }
                return out;
            };
            auto sa = signatures(a_, window_a_);
            auto sb = signatures(b_, window_b_);
            std::vector<int> oa(a_.size()), ob(b_.size());
            std::iota(oa.begin(), oa.end(), 0);
            std::iota(ob.begin(), ob.end(), 0);
            std::stable_sort(oa.begin(), oa.end(), [&](int x, int y) { return sa[x] < sa[y]; });
            std::stable_sort(ob.begin(), ob.end(), [&](int x, int y) { return sb[x] < sb[y]; });
            bijection_.assign(a_.size(), -1);
            for (std::size_t i = 0; i < oa.size(); ++i) {
                if (sa[oa[i]] != sb[ob[i]])
                    return false;
                bijection_[oa[i]] = ob[i];
            }
            return true;
        }

        auto extend(std::size_t i) -> bool
        {
            if (i == w_.moves.size()) {
                if (hidden_slot_ >= 0)
                    return close_window();
                return true;
            }
            auto [p, x] = w_.moves[i];
            int q = p - 1;
            if (static_cast<int>(i) == hid_) {
                auto saved = std::pair{ pos_a_[q], pos_b_[q] };
                hidden_slot_ = q;
                pos_a_[q] = pos_b_[q] = -1;
                window_a_.push_back(visible(pos_a_));
                window_b_.push_back(visible(pos_b_));
                if (extend(i + 1))
                    return true;
                window_a_.pop_back();
                window_b_.pop_back();
                hidden_slot_ = -1;
                std::tie(pos_a_[q], pos_b_[q]) = saved;
                return false;
            }
            bool closing = hidden_slot_ == q;
            if (closing) {
                if (! close_window())
                    return false;
                hidden_slot_ = -1;
            }
            auto saved = std::pair{ pos_a_[q], pos_b_[q] };
            pos_a_[q] = x;
            for (int y = 0; y < b_.size(); ++y) {
                pos_b_[q] = y;
                if (atomic_type(a_, visible(pos_a_)) != atomic_type(b_, visible(pos_b_)))
                    continue;
                bool in_window = hidden_slot_ >= 0;
                if (in_window) {
                    window_a_.push_back(visible(pos_a_));
                    window_b_.push_back(visible(pos_b_));
                }
                images_[i] = y;
                if (extend(i + 1))
                    return true;
                images_[i] = -1;
                if (in_window) {
                    window_a_.pop_back();
                    window_b_.pop_back();
                }
            }
            std::tie(pos_a_[q], pos_b_[q]) = saved;
            if (closing)
                hidden_slot_ = q;
            return false;
        }

        const Structure& a_;
        const Structure& b_;
        int k_;
        const BijectiveWord& w_;
        int hid_;
        int hidden_slot_ = -1;
        std::vector<int> pos_a_, pos_b_;
        std::vector<std::vector<int>> window_a_, window_b_;
        std::vector<int> images_;
        std::vector<int> bijection_;
    };

    auto check_word(const Structure& a, int k, const BijectiveWord& w) -> void
    {
        if (w.hidden < 0 || w.hidden > static_cast<int>(w.moves.size()))
            throw GameError("hidden index out of range");
        for (std::size_t i = 0; i < w.moves.size(); ++i) {
            auto [p, x] = w.moves[i];
            if (p < 1 || p > k || (static_cast<int>(i) + 1 != w.hidden && (x < 0 || x >= a.size())))
                throw GameError("move out of range");
        }
    }
}

auto bijective_answer(const Structure& a, const Structure& b, int k, const BijectiveWord& word)
    -> std::optional<BijectiveAnswer>
{
    if (a.signature() != b.signature())
        throw GameError("structures have different signatures");
    check_word(a, k, word);
    if (a.size() != b.size())
        return std::nullopt;
    // the empty relation must already be a partial isomorphism
    if (atomic_type(a, {}) != atomic_type(b, {}))
        return std::nullopt;
    return AnswerSearch(a, b, k, word).run();
}

auto is_winning_bijective_answer(const Structure& a, const Structure& b, int k, const BijectiveWord& word,
    const BijectiveAnswer& answer) -> bool
{
    check_word(a, k, word);
    if (a.size() != b.size() || answer.images.size() != word.moves.size())
        return false;
    if (word.hidden > 0) {
        auto sorted = answer.bijection;
        std::sort(sorted.begin(), sorted.end());
        std::vector<int> all(b.size());
        std::iota(all.begin(), all.end(), 0);
        if (sorted != all || static_cast<int>(answer.bijection.size()) != a.size())
            return false;
    }
    int reveals = word.hidden > 0 ? a.size() : 1;
    for (int reveal = 0; reveal < reveals; ++reveal) {
        std::vector<int> sa(k, -1), sb(k, -1);
        auto iso = [&] {
            PartialMap forward, backward;
            for (int q = 0; q < k; ++q)
                if (sa[q] >= 0) {
                    forward.emplace_back(sa[q], sb[q]);
                    backward.emplace_back(sb[q], sa[q]);
                }
            return is_partial_hom(a, b, forward, MapMode::function) && is_partial_hom(b, a, backward, MapMode::function);
        };
        if (! iso())
            return false;
        for (std::size_t i = 0; i < word.moves.size(); ++i) {
            int q = word.moves[i].pebble - 1;
            if (static_cast<int>(i) + 1 == word.hidden) {
                sa[q] = reveal;
                sb[q] = answer.bijection[reveal];
            } else {
                sa[q] = word.moves[i].element;
                sb[q] = answer.images[i];
                if (sb[q] < 0 || sb[q] >= b.size())
                    return false;
            }
            if (! iso())
                return false;
        }
    }
    return true;
}

auto decide_bijective_all_in_one(const Structure& a, const Structure& b, int k, int max_len, std::uint64_t budget)
    -> BijectiveVerdict
{
    if (a.signature() != b.signature())
        throw GameError("structures have different signatures");
    if (k < 1)
        throw GameError("at least one pebble is required");
    BijectiveVerdict verdict;
    if (a.size() != b.size() || atomic_type(a, {}) != atomic_type(b, {})) {
        verdict.winner = Winner::spoiler;
        return verdict;
    }
    if (a.size() == 0)
        return verdict;
    for (int len = 1; len <= max_len; ++len) {
        // pebble sequences with labels in order of first use
        std::vector<int> pebbles(len, 1);
        auto next_pebbles = [&] {
            for (int i = len - 1; i > 0; --i) {
                int limit = std::min(k, *std::max_element(pebbles.begin(), pebbles.begin() + i) + 1);
                if (pebbles[i] < limit) {
                    ++pebbles[i];
                    std::fill(pebbles.begin() + i + 1, pebbles.end(), 1);
                    return true;
                }
            }
            return false;
        };
        do {
            for (int hidden = 1; hidden <= len; ++hidden) {
                BijectiveWord w;
                for (int p : pebbles)
                    w.moves.push_back({ p, 0 });
                w.hidden = hidden;
                std::vector<int> free;
                for (int i = 0; i < len; ++i)
                    if (i + 1 != hidden)
                        free.push_back(i);
                while (true) {
                    if (++verdict.words > budget)
                        throw BudgetExceeded("bijective game word budget exhausted");
                    if (! AnswerSearch(a, b, k, w).run()) {
                        verdict.winner = Winner::spoiler;
                        verdict.spoiler_word = w;
                        return verdict;
                    }
                    std::size_t i = 0;
                    while (i < free.size() && ++w.moves[free[i]].element == a.size())
                        w.moves[free[i++]].element = 0;
                    if (i == free.size())
                        break;
                }
            }
        } while (next_pebbles());
    }
    verdict.winner = Winner::duplicator;
    return verdict;
}

} // namespace pebblepath
