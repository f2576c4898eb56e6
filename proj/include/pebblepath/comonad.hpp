#pragma once

#include "pebblepath/structure.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pebblepath {

template <typename E>
struct Move {
    int pebble;
    E element;

    auto operator<=>(const Move&) const = default;
};

template <typename E>
using Sequence = std::vector<Move<E>>;

// A play paired with a 1-based index into it.
template <typename E>
struct Indexed {
    Sequence<E> seq;
    int index = 1;

    auto operator<=>(const Indexed&) const = default;
};

using Play = Sequence<int>;
using IndexedPlay = Indexed<int>;

template <typename E>
auto counit(const Indexed<E>& p) -> const E&
{
    return p.seq.at(p.index - 1).element;
}

// f* : (s, i) |-> (t, i) with t_j = (p_j, f(s, j)).
template <typename E, typename F>
auto coextend(F&& f, const Indexed<E>& p)
{
    using R = std::decay_t<decltype(f(p))>;
    Indexed<R> out;
    out.index = p.index;
    out.seq.reserve(p.seq.size());
    Indexed<E> probe{ p.seq, 1 };
    for (std::size_t j = 0; j < p.seq.size(); ++j) {
        probe.index = static_cast<int>(j + 1);
        out.seq.push_back({ p.seq[j].pebble, f(probe) });
    }
    return out;
}

// PR applied to an ordinary map: relabel every element.
template <typename E, typename F>
auto pr_map(F&& f, const Indexed<E>& p)
{
    using R = std::decay_t<decltype(f(p.seq.front().element))>;
    Indexed<R> out;
    out.index = p.index;
    for (auto& m : p.seq)
        out.seq.push_back({ m.pebble, f(m.element) });
    return out;
}

template <typename E>
auto comultiply(const Indexed<E>& p) -> Indexed<Indexed<E>>
{
    return coextend([](const Indexed<E>& q) { return q; }, p);
}

template <typename E>
auto nu(const Indexed<E>& p) -> Sequence<E>
{
    return Sequence<E>(p.seq.begin(), p.seq.begin() + p.index);
}

// Comultiplication of the prefix comonad: s |-> [(p_1, s[1,1]), ..., (p_n, s[1,n])].
template <typename E>
auto prefix_comultiply(const Sequence<E>& s) -> Sequence<Sequence<E>>
{
    Sequence<Sequence<E>> out;
    for (std::size_t j = 0; j < s.size(); ++j)
        out.push_back({ s[j].pebble, Sequence<E>(s.begin(), s.begin() + j + 1) });
    return out;
}

auto last_pebbled(const Play& s, int pebble) -> std::optional<int>;
auto active_elements(const Play& s) -> std::vector<int>;

// True iff the pebble placed at position i (1-based) is not placed again at
// positions i+1..upto.
auto pebble_active(const Play& s, int i, int upto) -> bool;

auto is_valid_play(const Play& s, int k, int universe) -> bool;
auto is_valid_indexed(const IndexedPlay& p, int k, int universe) -> bool;

// Membership of ((s,i_1),...,(s,i_m)) in the lifted relation: shared play,
// active pebbles up to the largest index, and compatibility in the base.
auto lifted_holds(const Structure& a, int rel, const std::vector<IndexedPlay>& args) -> bool;

inline constexpr std::uint64_t default_carrier_budget = 2'000'000;

// Dense numbering of plays of length 1..n over k pebbles and a universe,
// ordered by length, then lexicographically by (pebble, element) moves.
class PlayIndex {
public:
    PlayIndex(int k, int universe, int max_len);

    auto k() const -> int { return k_; }
    auto universe() const -> int { return universe_; }
    auto max_len() const -> int { return max_len_; }

    // Number of plays; saturates at UINT64_MAX.
    auto play_count() const -> std::uint64_t;
    // Number of (play, index) points; saturates at UINT64_MAX.
    auto point_count() const -> std::uint64_t;

    auto play_id(const Play& s) const -> std::uint64_t;
    auto play_at(std::uint64_t id) const -> Play;
    auto point_id(const IndexedPlay& p) const -> std::uint64_t;
    auto point_at(std::uint64_t id) const -> IndexedPlay;
    // First point id of the given play; its points follow in index order.
    auto first_point(const Play& s) const -> std::uint64_t;

    auto contains(const Play& s) const -> bool;

private:
    auto letter(const Move<int>& m) const -> std::uint64_t;
    auto rank(const Play& s) const -> std::uint64_t;
    auto unrank(int len, std::uint64_t r) const -> Play;

    int k_, universe_, max_len_;
    std::uint64_t letters_;
    std::vector<std::uint64_t> play_offset_, point_offset_;
};

struct PRStructure {
    PlayIndex index;
    Structure structure;   // element i is index.point_at(i)
};

auto build_pr(const Structure& a, int k, int n, std::uint64_t budget = default_carrier_budget) -> PRStructure;

struct PStructure {
    PlayIndex index;
    Structure structure;   // element i is index.play_at(i)
};

auto build_p(const Structure& a, int k, int n, std::uint64_t budget = default_carrier_budget) -> PStructure;

// A map from the carrier of PR_{k,n}A to the elements of some B.
class CoKleisliMap {
public:
    CoKleisliMap(PlayIndex domain, std::vector<int> values);

    auto domain() const -> const PlayIndex& { return domain_; }
    auto values() const -> const std::vector<int>& { return values_; }
    auto at(std::uint64_t id) const -> int { return values_[id]; }
    auto operator()(const IndexedPlay& p) const -> int { return values_[domain_.point_id(p)]; }

private:
    PlayIndex domain_;
    std::vector<int> values_;
};

auto counit_map(const PlayIndex& index) -> CoKleisliMap;

// h . counit for an ordinary map h : A -> B.
auto lift_map(const PlayIndex& index, const std::vector<int>& h) -> CoKleisliMap;

auto coextension(const CoKleisliMap& f, const IndexedPlay& p) -> IndexedPlay;

// Textual play names such as "1:0;2:1@2".  Element names come from the
// structure and must not contain ':', ';' or '@'.
auto encode_play(const Play& s, const Structure& a) -> std::string;
auto encode_indexed(const IndexedPlay& p, const Structure& a) -> std::string;
auto decode_play(const std::string& text, const Structure& a) -> Play;
auto decode_indexed(const std::string& text, const Structure& a) -> IndexedPlay;

auto pr_as_named_structure(const PRStructure& pr, const Structure& a) -> Structure;

struct LawResult {
    std::string name;
    std::uint64_t checked = 0;
    std::uint64_t failures = 0;
    std::string counterexample;
};

struct LawReport {
    std::uint64_t seed = 0;
    std::vector<LawResult> laws;

    auto passed() const -> bool;
    auto find(const std::string& name) const -> const LawResult*;
};

using CoextensionFn = std::function<IndexedPlay(const CoKleisliMap&, const IndexedPlay&)>;

struct LawOptions {
    std::uint64_t seed = 0x5eed;
    int random_probes = 3;
    // Homomorphism checks for counit and the prefix map need both lifted
    // structures materialised.
    bool check_homomorphisms = true;
    // Replaces the coextension under test; used for negative controls.
    CoextensionFn coextension;
    std::uint64_t budget = default_carrier_budget;
};

auto check_comonad_laws(const Structure& a, int k, int n, const LawOptions& options = {}) -> LawReport;

// PR PR h . delta_A = delta_B . PR h on every carrier point.
auto check_delta_naturality(const Structure& a, const Structure& b, const std::vector<int>& h, int k, int n) -> LawResult;

} // namespace pebblepath
