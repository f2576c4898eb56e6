#pragma once

#include "pebblepath/decomposition.hpp"
#include "pebblepath/structure.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pebblepath {

struct PwStructure {
    Structure structure;
    PathDecomposition pd;
    std::string id;
};

inline constexpr std::uint64_t default_enumeration_budget = 2'000'000;

// Stable text key of a structure's isomorphism class, e.g. "3|E:0-1,1-2".
auto structure_id(const Structure& s) -> std::string;

// One structure per isomorphism class with at most max_size elements and
// pathwidth below k, ordered by size and then by id.  Structures are grown
// bag by bag along a path, so each comes with a decomposition of width
// below k.
auto enumerate_pw_structures(const Signature& sig, int k, int max_size,
    std::uint64_t budget = default_enumeration_budget) -> std::vector<PwStructure>;

// Same classes, found by filtering every structure through pathwidth_exact.
// Only practical for tiny sizes; used to cross-check the generator.
auto enumerate_pw_structures_by_filter(const Signature& sig, int k, int max_size,
    std::uint64_t budget = default_enumeration_budget) -> std::vector<PwStructure>;

// Left-to-right dynamic programme over the bags.  Throws DecompositionError
// if pd is not a valid decomposition of c.
auto hom_count_pd(const Structure& c, const PathDecomposition& pd, const Structure& a) -> BigCount;

using HomVector = std::map<std::string, BigCount>;

auto hom_vector(const std::vector<PwStructure>& tests, const Structure& a) -> HomVector;

struct HomVectorEntry {
    std::string id;
    BigCount in_a;
    BigCount in_b;
};

struct LovaszVerdict {
    // Equal counts for every test structure up to the bound.
    bool equivalent = true;
    std::optional<PwStructure> distinguishing;
    BigCount count_a;
    BigCount count_b;
    std::vector<HomVectorEntry> entries;
    int k = 1;
    int max_size = 0;
};

auto lovasz_equiv(const Structure& a, const Structure& b, int k, int max_size,
    std::uint64_t budget = default_enumeration_budget) -> LovaszVerdict;

// Tab-separated id, count in A, count in B; one line per test structure.
auto format_hom_vectors(const LovaszVerdict& v) -> std::string;

} // namespace pebblepath
