#pragma once

#include "pebblepath/comonad.hpp"
#include "pebblepath/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pebblepath {

class DecompositionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PathDecomposition {
    std::vector<std::vector<int>> bags;

    auto operator==(const PathDecomposition&) const -> bool = default;
};

// Chains partition the universe; pebbling[a] is in 1..k.
struct LinearForestCover {
    std::vector<std::vector<int>> chains;
    std::vector<int> pebbling;

    auto operator==(const LinearForestCover&) const -> bool = default;
};

struct Coalgebra {
    int k = 1;
    std::vector<IndexedPlay> alpha;

    auto operator==(const Coalgebra&) const -> bool = default;
};

// Per bag, element -> pebble.
using SectionFamily = std::vector<std::map<int, int>>;

struct Violation {
    std::string clause;   // "PD1", "FC2", "counit", ...
    std::string detail;
};

struct PdCheck {
    std::optional<Violation> violation;
    int width = 0;

    explicit operator bool() const { return ! violation; }
};

// Width is the largest bag size minus one, and 0 when every bag is empty.
auto validate_pd(const Structure& a, const PathDecomposition& pd) -> PdCheck;
auto validate_cover(const Structure& a, const LinearForestCover& c, int k) -> std::optional<Violation>;
auto validate_coalgebra(const Structure& a, const Coalgebra& alpha) -> std::optional<Violation>;

// Throws DecompositionError unless pd is valid of width < k.
auto build_section_family(const Structure& a, const PathDecomposition& pd, int k) -> SectionFamily;

auto pd_to_cover(const Structure& a, const PathDecomposition& pd, int k) -> LinearForestCover;
auto cover_to_pd(const Structure& a, const LinearForestCover& c) -> PathDecomposition;

// Chains sorted by least element, pebbles renamed in order of first use.
auto canonicalize_cover(const LinearForestCover& c) -> LinearForestCover;

auto cover_to_coalgebra(const Structure& a, const LinearForestCover& c, int k) -> Coalgebra;
// Chains come out sorted by least element.
auto coalgebra_to_cover(const Structure& a, const Coalgebra& alpha) -> LinearForestCover;

// A homomorphism that keeps pebble labels and maps each chain into a single
// chain, preserving order.
auto is_cover_morphism(const Structure& a, const LinearForestCover& ca,
    const Structure& b, const LinearForestCover& cb, const std::vector<int>& h) -> bool;

inline constexpr std::uint64_t default_search_budget = 50'000'000;

struct PathwidthResult {
    int width = 0;
    std::vector<int> layout;
    PathDecomposition certificate;
};

// Exact vertex separation number by depth-first search over layouts of each
// Gaifman component, with memoised dead prefixes.
auto pathwidth_exact(const Structure& a, std::uint64_t budget = default_search_budget) -> PathwidthResult;

// Direct search for a k-pebble linear forest cover.
auto find_cover(const Structure& a, int k, std::uint64_t budget = default_search_budget) -> std::optional<LinearForestCover>;

struct CoalgebraNumber {
    int k = 1;
    Coalgebra witness;
};

// Least k admitting a coalgebra, found through cover search; the witness is
// validated before returning.
auto coalgebra_number(const Structure& a, std::uint64_t budget = default_search_budget) -> CoalgebraNumber;

// Text forms: "bag a b", "chain a:1 b:2", and "k 2" followed by "a -> seq@i".
auto format_pd(const PathDecomposition& pd, const Structure& a) -> std::string;
auto parse_pd(const std::string& text, const Structure& a) -> PathDecomposition;
auto format_cover(const LinearForestCover& c, const Structure& a) -> std::string;
auto parse_cover(const std::string& text, const Structure& a) -> LinearForestCover;
auto format_coalgebra(const Coalgebra& alpha, const Structure& a) -> std::string;
auto parse_coalgebra(const std::string& text, const Structure& a) -> Coalgebra;

} // namespace pebblepath
