#include "pebblepath/logic.hpp"

#include <algorithm>

namespace pebblepath {

FormulaGenerator::FormulaGenerator(GeneratorOptions options, std::uint64_t seed) :
    options_(std::move(options)), rng_(seed)
{
    if (options_.k < 1 || options_.relations.empty())
        throw LogicError("generator needs at least one variable and one relation");
}

auto FormulaGenerator::pick(int lo, int hi) -> int
{
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
}

auto FormulaGenerator::next() -> Formula
{
    std::vector<int> scope;
    for (int v = 1; v <= options_.k; ++v)
        scope.push_back(v);
    auto f = generate(options_.depth, scope);
    if (auto r = validate_restricted(f, options_.k); ! r)
        throw LogicError("generator produced an unrestricted formula at " + r.path + ": " + r.reason);
    return f;
}

auto FormulaGenerator::literal(const std::vector<int>& scope) -> Formula
{
    int choices = static_cast<int>(options_.relations.size()) + (options_.equality ? 1 : 0);
    int c = pick(0, choices - 1);
    bool eq = c == static_cast<int>(options_.relations.size());
    std::string rel = eq ? "=" : options_.relations[c].name;
    int arity = eq ? 2 : options_.relations[c].arity;
    std::vector<int> args;
    for (int i = 0; i < arity; ++i)
        args.push_back(scope[pick(0, static_cast<int>(scope.size()) - 1)]);
    return pick(0, 2) == 0 ? fo::natom(rel, args) : fo::atom(rel, args);
}

auto FormulaGenerator::quantified(int depth, const std::vector<int>& scope) -> Formula
{
    int var = pick(1, options_.k);
    auto inner = scope;
    if (std::find(inner.begin(), inner.end(), var) == inner.end())
        inner.push_back(var);
    auto body = generate(depth - 1, inner);
    switch (pick(0, 2)) {
    case 0: return fo::at_most(pick(0, options_.max_count), var, std::move(body));
    case 1: return fo::at_least(pick(0, options_.max_count), var, std::move(body));
    default: return fo::exists(var, std::move(body));
    }
}

auto FormulaGenerator::sentence(int depth) -> Formula
{
    return quantified(std::max(depth, 1), {});
}

// Free variables always lie in scope; a conjunction gets at most one member
// that may be quantified with free variables, or a block of counting
// quantifiers sharing variable and body.
auto FormulaGenerator::generate(int depth, const std::vector<int>& scope) -> Formula
{
    if (scope.empty())
        return sentence(depth);
    if (depth <= 0)
        return literal(scope);
    switch (pick(0, 5)) {
    case 0: return literal(scope);
    case 1:
    case 2: return quantified(depth, scope);
    case 3: {
        std::vector<Formula> parts;
        for (int i = pick(1, options_.max_set); i-- > 0;)
            parts.push_back(generate(depth - 1, scope));
        return fo::any(std::move(parts));
    }
    case 4: {
        std::vector<Formula> parts{ generate(depth - 1, scope) };
        for (int i = pick(0, options_.max_set - 1); i-- > 0;)
            parts.push_back(pick(0, 1) ? literal(scope) : sentence(depth - 1));
        std::shuffle(parts.begin(), parts.end(), rng_);
        return fo::all(std::move(parts));
    }
    default: {
        // a block of thresholds on one counted formula
        auto first = quantified(depth, scope);
        std::vector<Formula> parts{ first };
        for (int i = pick(1, options_.max_set - 1); i-- > 0;) {
            auto again = pick(0, 1) ? fo::at_most(pick(0, options_.max_count), first.var, first.body())
                                    : fo::at_least(pick(0, options_.max_count), first.var, first.body());
            parts.push_back(std::move(again));
        }
        if (pick(0, 1))
            parts.push_back(literal(scope));
        return fo::all(std::move(parts));
    }
    }
}

} // namespace pebblepath
