#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pebblepath {

using Tuple = std::vector<int>;
using BigCount = boost::multiprecision::cpp_int;

class StructureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Thrown when a computation would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RelationSymbol {
    std::string name;
    int arity = 0;

    auto operator<=>(const RelationSymbol&) const = default;
};

// Relation symbols, kept sorted by name so indices are canonical.
class Signature {
public:
    Signature() = default;
    Signature(std::initializer_list<RelationSymbol> symbols);
    explicit Signature(std::vector<RelationSymbol> symbols);

    auto size() const -> int { return static_cast<int>(symbols_.size()); }
    auto symbol(int rel) const -> const RelationSymbol& { return symbols_.at(rel); }
    auto symbols() const -> const std::vector<RelationSymbol>& { return symbols_; }
    auto index_of(const std::string& name) const -> std::optional<int>;
    auto arity(int rel) const -> int { return symbols_.at(rel).arity; }
    auto max_arity() const -> int;

    auto with(RelationSymbol extra) const -> Signature;
    auto without(const std::string& name) const -> Signature;

    auto operator==(const Signature&) const -> bool = default;

private:
    std::vector<RelationSymbol> symbols_;
};

struct TupleHash {
    auto operator()(const Tuple& t) const noexcept -> std::size_t;
};

// Interpretation of one relation symbol.  Membership uses a dense bitmap when
// universe^arity is small and a hash set otherwise.
class Relation {
public:
    Relation(int universe, int arity);

    auto arity() const -> int { return arity_; }
    auto tuples() const -> const std::vector<Tuple>& { return tuples_; }
    auto size() const -> std::size_t { return tuples_.size(); }
    auto contains(std::span<const int> t) const -> bool;
    // Returns false if the tuple was already present.
    auto insert(const Tuple& t) -> bool;
    auto sort() -> void;

private:
    auto dense_key(std::span<const int> t) const -> std::size_t;

    int universe_;
    int arity_;
    std::vector<Tuple> tuples_;
    std::vector<bool> dense_;
    bool use_dense_ = false;
    std::unordered_set<Tuple, TupleHash> sparse_;
};

// A finite relational structure with universe {0, ..., size-1}.
class Structure {
public:
    Structure() = default;
    Structure(Signature sig, int size);
    // Validates the raw data first; throws StructureError on any defect.
    Structure(Signature sig, int size, const std::vector<std::vector<Tuple>>& relations);

    auto signature() const -> const Signature& { return sig_; }
    auto size() const -> int { return size_; }
    auto relation(int rel) const -> const Relation& { return relations_.at(rel); }
    auto tuples(int rel) const -> const std::vector<Tuple>& { return relations_.at(rel).tuples(); }
    auto tuples(const std::string& name) const -> const std::vector<Tuple>&;
    auto holds(int rel, std::span<const int> t) const -> bool { return relations_[rel].contains(t); }
    auto tuple_count() const -> std::size_t;

    // Throws StructureError on bad arity, out-of-range element or duplicate.
    auto add_tuple(int rel, const Tuple& t) -> void;
    auto add_tuple(const std::string& rel, const Tuple& t) -> void;

    auto element_name(int e) const -> std::string;
    auto names() const -> const std::vector<std::string>& { return names_; }
    auto set_names(std::vector<std::string> names) -> void;
    auto find_element(const std::string& name) const -> std::optional<int>;

    // Same signature, size and tuples; element names are ignored.
    auto operator==(const Structure& other) const -> bool;

private:
    Signature sig_;
    int size_ = 0;
    std::vector<Relation> relations_;
    std::vector<std::string> names_;
};

auto validate_structure(const Signature& sig, int size, const std::vector<std::vector<Tuple>>& relations) -> void;

// Reflexive symmetric co-occurrence graph.
class GaifmanGraph {
public:
    explicit GaifmanGraph(const Structure& s);

    auto size() const -> int { return n_; }
    auto adjacent(int a, int b) const -> bool { return a == b || adj_[a * n_ + b]; }
    // Neighbours other than the element itself, ascending.
    auto neighbours(int a) const -> const std::vector<int>& { return nbrs_[a]; }
    auto edges() const -> std::vector<std::pair<int, int>>;
    auto components() const -> std::vector<std::vector<int>>;

private:
    int n_;
    std::vector<bool> adj_;
    std::vector<std::vector<int>> nbrs_;
};

auto gaifman(const Structure& s) -> GaifmanGraph;

struct Substructure {
    Structure structure;
    std::vector<int> embedding;   // new element -> old element
};

auto induced_substructure(const Structure& s, std::vector<int> subset) -> Substructure;

using PartialMap = std::vector<std::pair<int, int>>;

enum class MapMode { function, relation };

// In relation mode an element may carry several images and every choice of
// images must be preserved.
auto is_partial_hom(const Structure& a, const Structure& b, const PartialMap& g, MapMode mode) -> bool;
auto is_homomorphism(const Structure& a, const Structure& b, std::span<const int> h) -> bool;

using HomVisitor = std::function<bool(const std::vector<int>&)>;

// Visits homomorphisms in lexicographic order of image vectors; stops when
// the visitor returns false.
auto enumerate_homs(const Structure& a, const Structure& b, const HomVisitor& visit) -> void;
auto count_homs_bruteforce(const Structure& a, const Structure& b) -> BigCount;
auto find_homomorphism(const Structure& a, const Structure& b) -> std::optional<std::vector<int>>;

auto is_isomorphism(const Structure& a, const Structure& b, std::span<const int> f) -> bool;
auto find_isomorphism(const Structure& a, const Structure& b) -> std::optional<std::vector<int>>;

// Lexicographically least relabelled tuple list over all permutations.
// Only for small universes.
auto canonical_form(const Structure& s) -> std::vector<std::vector<Tuple>>;

inline const std::string identity_symbol = "I";

auto j_expand(const Structure& a) -> Structure;

struct Quotient {
    Structure structure;
    std::vector<int> projection;   // element -> class
};

auto i_quotient(const Structure& b) -> Quotient;
auto reduct(const Structure& s, const Signature& sig) -> Structure;

// Small constructors over the single binary symbol "E".
namespace graphs {
    auto edge_signature() -> Signature;
    auto undirected(int n, const std::vector<std::pair<int, int>>& edges) -> Structure;
    auto directed(int n, const std::vector<std::pair<int, int>>& edges) -> Structure;
    auto path(int n) -> Structure;
    auto cycle(int n) -> Structure;
    auto clique(int n) -> Structure;
    auto edgeless(int n) -> Structure;
}

} // namespace pebblepath
