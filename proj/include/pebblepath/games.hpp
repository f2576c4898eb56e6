#pragma once

#include "pebblepath/comonad.hpp"
#include "pebblepath/structure.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace pebblepath {

class GameError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Winner { spoiler, duplicator };

inline constexpr std::uint64_t default_state_budget = 5'000'000;

// Answers a Spoiler word with one image per move, or nothing when the word
// is out of range or no winning answer exists.
class DuplicatorStrategy {
public:
    using Respond = std::function<std::optional<std::vector<int>>(const Play&)>;

    DuplicatorStrategy(Respond respond, std::optional<int> max_len) :
        respond_(std::move(respond)), max_len_(max_len)
    {
    }

    auto respond(const Play& word) const -> std::optional<std::vector<int>> { return respond_(word); }
    auto max_len() const -> std::optional<int> { return max_len_; }

private:
    Respond respond_;
    std::optional<int> max_len_;
};

// The all-in-one game as a deterministic transition system on survivor sets.
class AllInOneGame {
public:
    // pebble - 1 -> element, -1 when the pebble is off the board
    using Config = std::vector<int>;

    struct State {
        Config spoiler;
        std::vector<Config> survivors;   // sorted

        auto operator<=>(const State&) const = default;
    };

    AllInOneGame(Structure a, Structure b, int k, MapMode mode);

    auto a() const -> const Structure& { return a_; }
    auto b() const -> const Structure& { return b_; }
    auto k() const -> int { return k_; }
    auto mode() const -> MapMode { return mode_; }

    auto initial() const -> State;
    auto step(const State& s, int pebble, int element) const -> State;
    auto replay(const Play& word) const -> State;

    // After Spoiler's config has pebble p moved, is the answer config still
    // a partial homomorphism?  Only constraints touching p are rechecked.
    auto consistent(const Config& spoiler, const Config& image, int pebble) const -> bool;

    // Lexicographically least response that survives every prefix.
    auto respond(const Play& word) const -> std::optional<std::vector<int>>;
    auto is_winning_response(const Play& word, const std::vector<int>& response) const -> bool;

private:
    Structure a_, b_;
    int k_;
    MapMode mode_;
    std::vector<std::vector<std::pair<int, Tuple>>> tuples_at_;   // element -> (rel, tuple)
    bool nullary_ok_ = true;
};

struct AioOptions {
    bool equality = true;
    std::optional<int> max_len;
    std::uint64_t budget = default_state_budget;
};

struct AioVerdict {
    Winner winner = Winner::duplicator;
    Play spoiler_word;
    // Every reachable state with its BFS depth; closed under moves within
    // the length bound.  Only filled for a Duplicator win.
    std::vector<std::pair<AllInOneGame::State, int>> reachable;
    std::optional<DuplicatorStrategy> strategy;
    std::shared_ptr<const AllInOneGame> game;
};

auto decide_all_in_one(const Structure& a, const Structure& b, int k, const AioOptions& options = {}) -> AioVerdict;

struct DalmauConfig {
    std::vector<int> domain;                // sorted
    std::vector<std::vector<int>> homs;     // images aligned with domain, sorted

    auto operator<=>(const DalmauConfig&) const = default;
};

// Dalmau's game against the complete Duplicator strategy.
class DalmauGame {
public:
    DalmauGame(Structure a, Structure b, int k);

    auto a() const -> const Structure& { return a_; }
    auto b() const -> const Structure& { return b_; }
    auto k() const -> int { return k_; }

    auto initial() const -> DalmauConfig;
    // Shrinks to a subset or blows up to a superset of size at most k; throws
    // GameError on an illegal move.
    auto move(const DalmauConfig& c, std::vector<int> domain) const -> DalmauConfig;
    auto moves(const DalmauConfig& c) const -> std::vector<std::vector<int>>;

private:
    auto is_partial_hom_on(const std::vector<int>& domain, const std::vector<int>& image) const -> bool;

    Structure a_, b_;
    int k_;
};

struct DalmauVerdict {
    Winner winner = Winner::duplicator;
    std::vector<std::vector<int>> spoiler_moves;   // domains played from the empty start
    std::vector<DalmauConfig> reachable;           // Duplicator win only
};

auto decide_dalmau(const Structure& a, const Structure& b, int k, std::uint64_t budget = default_state_budget) -> DalmauVerdict;

// The classic existential k-pebble game with per-round adaptivity, as a
// greatest fixed point over positions.
auto decide_existential_pebble_game(const Structure& a, const Structure& b, int k) -> Winner;

// Requires a Duplicator verdict.  f(s, i) is the i-th entry of the strategy's
// answer to s; the result is checked to be a homomorphism out of PR_{k,n}A.
auto strategy_to_cokleisli(const Structure& a, const Structure& b, int k, int n, const DuplicatorStrategy& strategy)
    -> CoKleisliMap;

// Checks f is a homomorphism PR_{k,n}A -> B and wraps it as a strategy.  With
// equality on, answers go through alias_duplicates so that pebbles sharing an
// element share an image.
auto cokleisli_to_strategy(const Structure& a, const Structure& b, const CoKleisliMap& f, bool equality)
    -> DuplicatorStrategy;

auto is_duplicating(const Play& s) -> bool;

struct Reduced {
    Play play;
    std::vector<int> index_map;   // 1-based position in the input -> position in play
};

// Greedy left-to-right deletion of every move that repeats the element of a
// different active pebble.
auto remove_duplicates(const Play& s) -> Reduced;

// Replays s with one pebble per distinct active element.  The k pebbles
// suffice, and a move onto an element already held is absorbed into the
// earlier placement.
auto alias_duplicates(const Play& s, int k) -> Reduced;

struct BranchingMap {
    Play prefix;
    int pebble = 1;
    Play suffix;
    std::vector<int> table;
};

auto branching_map(const CoKleisliMap& f, const Play& prefix, int pebble, const Play& suffix) -> BranchingMap;

// g after f in the coKleisli sense is the counit, and the other way round.
auto check_cokleisli_iso(const CoKleisliMap& f, const CoKleisliMap& g) -> bool;

struct SeparationWitness {
    Structure a, b;
    std::uint64_t candidates = 0;
};

// Seeded search over two-coloured digraphs on at most 8 vertices for a pair
// where the classic 2-pebble game is won by Spoiler and the all-in-one game
// by Duplicator.
auto find_separation_witness(std::uint64_t seed, std::uint64_t max_candidates) -> std::optional<SeparationWitness>;

} // namespace pebblepath
