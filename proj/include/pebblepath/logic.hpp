#pragma once

#include "pebblepath/structure.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pebblepath {

class LogicError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Variables are numbered 1..k and printed as x1..xk.  The relation name "="
// is the built-in equality atom.
struct Formula {
    enum class Kind { atom, negated_atom, disjunction, conjunction, at_most, at_least, exists };

    Kind kind = Kind::atom;
    std::string relation;
    std::vector<int> args;
    std::vector<Formula> parts;   // disjuncts, conjuncts, or the quantifier body
    int bound = 0;                // counting threshold
    int var = 0;                  // quantified variable

    auto operator<=>(const Formula& o) const -> std::strong_ordering;
    auto operator==(const Formula& o) const -> bool { return (*this <=> o) == 0; }

    auto body() const -> const Formula& { return parts.at(0); }
};

namespace fo {
    auto atom(std::string rel, std::vector<int> args) -> Formula;
    auto natom(std::string rel, std::vector<int> args) -> Formula;
    auto any(std::vector<Formula> parts) -> Formula;
    auto all(std::vector<Formula> parts) -> Formula;
    auto at_most(int m, int var, Formula body) -> Formula;
    auto at_least(int m, int var, Formula body) -> Formula;
    auto exists(int var, Formula body) -> Formula;
}

// Formulas of the translated logic.  In an exact count the counted
// variable is bound only in the body, never in the quantifier-free side.
struct TFormula {
    enum class Kind { atom, negated_atom, disjunction, pair, exact };

    Kind kind = Kind::atom;
    std::string relation;
    std::vector<int> args;
    std::vector<TFormula> parts;      // disjuncts, or the body of an exact count
    std::vector<TFormula> free_side;  // quantifier-free conjuncts
    std::vector<TFormula> sentences;
    int count = 0;
    int var = 0;

    auto operator<=>(const TFormula& o) const -> std::strong_ordering;
    auto operator==(const TFormula& o) const -> bool { return (*this <=> o) == 0; }
};

// Syntactic normal form: disjunction and conjunction members sorted and
// deduplicated, recursively.
auto normalize(const Formula& f) -> Formula;
auto same_formula(const Formula& f, const Formula& g) -> bool;

auto free_variables(const Formula& f) -> std::vector<int>;
auto free_variables(const TFormula& f) -> std::vector<int>;
auto is_quantifier_free(const Formula& f) -> bool;
auto is_sentence(const Formula& f) -> bool;
auto max_variable(const Formula& f) -> int;
auto quantifier_rank(const Formula& f) -> int;
auto quantifier_rank(const TFormula& f) -> int;

struct Restriction {
    bool ok = true;
    std::string path;     // e.g. "and[1]/exists-leq/or[0]"
    std::string reason;

    explicit operator bool() const { return ok; }
};

// Every conjunction has at most one quantified conjunct with free
// variables, except that several counting quantifiers over the same
// variable and body may appear together.  With k > 0, variables must lie in
// 1..k.
auto validate_restricted(const Formula& f, int k = 0) -> Restriction;

// assignment[v] is the element bound to variable v, or -1.
using Assignment = std::vector<int>;

auto model_check(const Structure& a, const Assignment& asg, const Formula& f) -> bool;
auto model_check_translated(const Structure& a, const Assignment& asg, const TFormula& f) -> bool;

// At-least counts become a disjunction of exact counts up to max_universe,
// so the translation is faithful on structures with at most that many
// elements.  Throws LogicError outside the restricted fragment.
auto translate_t(const Formula& f, int max_universe) -> TFormula;
auto translate_u(const TFormula& f) -> Formula;

// S-expressions:
//   (atom E x1 x2) (natom E x1 x2) (or ...) (and ...) (and-r (...) (...))
//   (exists-leq 2 x1 f) (exists-geq 2 x1 f) (exists x1 f)
//   (tor ...) (tand (X...) (Y...)) (count-exact n x1 (X...) (Y...) f)
auto parse_formula(const std::string& text) -> Formula;
auto format_formula(const Formula& f) -> std::string;
auto parse_translated(const std::string& text) -> TFormula;
auto format_translated(const TFormula& f) -> std::string;

struct TypeReport {
    bool equivalent = true;
    // Least rank at which the empty tuple's types differ.
    std::optional<int> distinguished_at;
    // Rank at which the joint partition of tuples stopped refining, if
    // reached within the requested ranks.
    std::optional<int> stable_at;
};

inline constexpr std::uint64_t default_type_budget = 2'000'000;

// Counting types of tuples of length up to k.  A rank r+1 type is the
// atomic type together with, per extension slot, the multiset of rank r
// types of the extended tuples; tuples shorter than k are extended by
// appending, full tuples by overwriting each slot in turn.  Types are
// interned jointly for both structures.
auto refine_types(const Structure& a, const Structure& b, int k, int ranks,
    std::uint64_t budget = default_type_budget) -> TypeReport;
auto equiv_by_types(const Structure& a, const Structure& b, int k, int n) -> bool;
// Refines until the partition is stable.
auto equiv_by_stable_types(const Structure& a, const Structure& b, int k) -> TypeReport;

struct GeneratorOptions {
    int k = 2;
    int depth = 3;
    int max_set = 3;
    int max_count = 3;
    std::vector<RelationSymbol> relations{ { "E", 2 } };
    bool equality = true;
};

// Random formulas of the restricted fragment with free variables among
// x1..xk.
class FormulaGenerator {
public:
    FormulaGenerator(GeneratorOptions options, std::uint64_t seed);

    auto next() -> Formula;

private:
    auto generate(int depth, const std::vector<int>& scope) -> Formula;
    auto literal(const std::vector<int>& scope) -> Formula;
    auto quantified(int depth, const std::vector<int>& scope) -> Formula;
    auto sentence(int depth) -> Formula;
    auto pick(int lo, int hi) -> int;

    GeneratorOptions options_;
    std::mt19937_64 rng_;
};

} // namespace pebblepath
