#pragma once

#include "pebblepath/games.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace pebblepath {

// A Spoiler word in the bijective all-in-one game.  The element at the
// hidden position (1-based) is ignored; 0 means nothing is hidden.
struct BijectiveWord {
    Play moves;
    int hidden = 0;

    auto operator==(const BijectiveWord&) const -> bool = default;
};

// images[j] answers move j + 1 (-1 at the hidden position); bijection maps
// every candidate for the hidden element to its image.
struct BijectiveAnswer {
    std::vector<int> images;
    std::vector<int> bijection;
};

// Lexicographically least answer under which every prefix relation is a
// partial isomorphism whatever the hidden element turns out to be.
auto bijective_answer(const Structure& a, const Structure& b, int k, const BijectiveWord& word)
    -> std::optional<BijectiveAnswer>;

auto is_winning_bijective_answer(const Structure& a, const Structure& b, int k, const BijectiveWord& word,
    const BijectiveAnswer& answer) -> bool;

struct BijectiveVerdict {
    Winner winner = Winner::duplicator;
    BijectiveWord spoiler_word;
    std::uint64_t words = 0;
};

// Exhaustive over words up to max_len that hide one position, with pebbles
// named in order of first use.  Hiding never hurts Spoiler: an answer to a
// hiding word answers every reveal of it.
auto decide_bijective_all_in_one(const Structure& a, const Structure& b, int k, int max_len,
    std::uint64_t budget = default_state_budget) -> BijectiveVerdict;

} // namespace pebblepath
