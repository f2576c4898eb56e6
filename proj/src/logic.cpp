#include "pebblepath/logic.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace pebblepath {

using Kind = Formula::Kind;
using TKind = TFormula::Kind;

auto Formula::operator<=>(const Formula& o) const -> std::strong_ordering
{
    if (auto c = kind <=> o.kind; c != 0)
        return c;
    if (auto c = relation <=> o.relation; c != 0)
        return c;
    if (auto c = args <=> o.args; c != 0)
        return c;
    if (auto c = parts <=> o.parts; c != 0)
        return c;
    if (auto c = bound <=> o.bound; c != 0)
        return c;
    return var <=> o.var;
}

auto TFormula::operator<=>(const TFormula& o) const -> std::strong_ordering
{
    if (auto c = kind <=> o.kind; c != 0)
        return c;
    if (auto c = relation <=> o.relation; c != 0)
        return c;
    if (auto c = args <=> o.args; c != 0)
        return c;
    if (auto c = parts <=> o.parts; c != 0)
        return c;
    if (auto c = free_side <=> o.free_side; c != 0)
        return c;
    if (auto c = sentences <=> o.sentences; c != 0)
        return c;
    if (auto c = count <=> o.count; c != 0)
        return c;
    return var <=> o.var;
}

namespace fo {
    auto atom(std::string rel, std::vector<int> args) -> Formula
    {
        return { Kind::atom, std::move(rel), std::move(args), {}, 0, 0 };
    }

    auto natom(std::string rel, std::vector<int> args) -> Formula
    {
        return { Kind::negated_atom, std::move(rel), std::move(args), {}, 0, 0 };
    }

    auto any(std::vector<Formula> parts) -> Formula
    {
        return { Kind::disjunction, {}, {}, std::move(parts), 0, 0 };
    }

    auto all(std::vector<Formula> parts) -> Formula
    {
        return { Kind::conjunction, {}, {}, std::move(parts), 0, 0 };
    }

    auto at_most(int m, int var, Formula body) -> Formula
    {
        return { Kind::at_most, {}, {}, { std::move(body) }, m, var };
    }

    auto at_least(int m, int var, Formula body) -> Formula
    {
        return { Kind::at_least, {}, {}, { std::move(body) }, m, var };
    }

    auto exists(int var, Formula body) -> Formula
    {
        return { Kind::exists, {}, {}, { std::move(body) }, 1, var };
    }
}

namespace {
    auto is_quantifier(Kind k) -> bool
    {
        return k == Kind::at_most || k == Kind::at_least || k == Kind::exists;
    }

    auto kind_name(Kind k) -> std::string
    {
        switch (k) {
        case Kind::atom: return "atom";
        case Kind::negated_atom: return "natom";
        case Kind::disjunction: return "or";
        case Kind::conjunction: return "and";
        case Kind::at_most: return "exists-leq";
        case Kind::at_least: return "exists-geq";
        case Kind::exists: return "exists";
        }
        return "?";
    }

    auto collect_free(const Formula& f, std::set<int>& out) -> void
    {
        switch (f.kind) {
        case Kind::atom:
        case Kind::negated_atom:
            out.insert(f.args.begin(), f.args.end());
            return;
        case Kind::disjunction:
        case Kind::conjunction:
            for (auto& p : f.parts)
                collect_free(p, out);
            return;
        default: {
            std::set<int> inner;
            collect_free(f.body(), inner);
            inner.erase(f.var);
            out.insert(inner.begin(), inner.end());
        }
        }
    }

    auto collect_free(const TFormula& f, std::set<int>& out) -> void
    {
        switch (f.kind) {
        case TKind::atom:
        case TKind::negated_atom:
            out.insert(f.args.begin(), f.args.end());
            return;
        case TKind::disjunction:
            for (auto& p : f.parts)
                collect_free(p, out);
            return;
        case TKind::pair:
        case TKind::exact: {
            for (auto& x : f.free_side)
                collect_free(x, out);
            for (auto& y : f.sentences)
                collect_free(y, out);
            if (f.kind == TKind::exact) {
                std::set<int> inner;
                collect_free(f.parts.at(0), inner);
                inner.erase(f.var);
                out.insert(inner.begin(), inner.end());
            }
        }
        }
    }
}

auto normalize(const Formula& f) -> Formula
{
    Formula out = f;
    for (auto& p : out.parts)
        p = normalize(p);
    if (f.kind == Kind::disjunction || f.kind == Kind::conjunction) {
        std::sort(out.parts.begin(), out.parts.end());
        out.parts.erase(std::unique(out.parts.begin(), out.parts.end()), out.parts.end());
    }
    return out;
}

auto same_formula(const Formula& f, const Formula& g) -> bool
{
    return normalize(f) == normalize(g);
}

auto free_variables(const Formula& f) -> std::vector<int>
{
    std::set<int> out;
    collect_free(f, out);
    return { out.begin(), out.end() };
}

auto free_variables(const TFormula& f) -> std::vector<int>
{
    std::set<int> out;
    collect_free(f, out);
    return { out.begin(), out.end() };
}

auto is_quantifier_free(const Formula& f) -> bool
{
    if (is_quantifier(f.kind))
        return false;
    return std::all_of(f.parts.begin(), f.parts.end(), [](const Formula& p) { return is_quantifier_free(p); });
}

auto is_sentence(const Formula& f) -> bool
{
    return free_variables(f).empty();
}

auto max_variable(const Formula& f) -> int
{
    int m = f.var;
    for (int v : f.args)
        m = std::max(m, v);
    for (auto& p : f.parts)
        m = std::max(m, max_variable(p));
    return m;
}

auto quantifier_rank(const Formula& f) -> int
{
    int inner = 0;
    for (auto& p : f.parts)
        inner = std::max(inner, quantifier_rank(p));
    return inner + (is_quantifier(f.kind) ? 1 : 0);
}

// The sentences of an exact count sit beside the count, not under it.
auto quantifier_rank(const TFormula& f) -> int
{
    int inner = 0;
    for (auto& p : f.parts)
        inner = std::max(inner, quantifier_rank(p));
    int side = 0;
    for (auto& p : f.sentences)
        side = std::max(side, quantifier_rank(p));
    return std::max(side, inner + (f.kind == TKind::exact ? 1 : 0));
}

namespace {
    auto validate_at(const Formula& f, int k, const std::string& path, Restriction& r) -> void
    {
        auto fail = [&](std::string reason) {
            if (r.ok) {
                r.ok = false;
                r.path = path.empty() ? "root" : path;
                r.reason = std::move(reason);
            }
        };
        auto here = path.empty() ? kind_name(f.kind) : path + "/" + kind_name(f.kind);
        switch (f.kind) {
        case Kind::atom:
        case Kind::negated_atom:
            for (int v : f.args)
                if (v < 1 || (k > 0 && v > k))
                    fail("variable x" + std::to_string(v) + " out of range");
            return;
        case Kind::disjunction:
        case Kind::conjunction:
            for (std::size_t i = 0; i < f.parts.size(); ++i)
                validate_at(f.parts[i], k, here + "[" + std::to_string(i) + "]", r);
            break;
        default:
            if (f.parts.size() != 1)
                fail("quantifier without a single body");
            if (f.var < 1 || (k > 0 && f.var > k))
                fail("variable x" + std::to_string(f.var) + " out of range");
            if (f.bound < 0)
                fail("negative counting threshold");
            if (! f.parts.empty())
                validate_at(f.body(), k, here, r);
            return;
        }
        if (f.kind != Kind::conjunction)
            return;
        std::vector<const Formula*> open;
        for (auto& p : f.parts)
            if (! is_quantifier_free(p) && ! is_sentence(p))
                open.push_back(&p);
        if (open.size() <= 1)
            return;
        // several counting quantifiers over one variable and one body
        auto body = normalize(open.front()->parts.empty() ? Formula{} : open.front()->body());
        for (auto* q : open)
            if (! is_quantifier(q->kind) || q->var != open.front()->var || normalize(q->body()) != body) {
                fail("conjunction with " + std::to_string(open.size()) + " quantified conjuncts that have free variables");
                return;
            }
    }
}

auto validate_restricted(const Formula& f, int k) -> Restriction
{
    Restriction r;
    validate_at(f, k, "", r);
    return r;
}

namespace {
    auto lookup(const Assignment& asg, int v) -> int
    {
        if (v < 0 || v >= static_cast<int>(asg.size()) || asg[v] < 0)
            throw LogicError("unbound variable x" + std::to_string(v));
        return asg[v];
    }

    auto atom_holds(const Structure& a, const Assignment& asg, const std::string& rel, const std::vector<int>& args) -> bool
    {
        Tuple t;
        for (int v : args)
            t.push_back(lookup(asg, v));
        if (rel == "=") {
            if (t.size() != 2)
                throw LogicError("equality takes two arguments");
            return t[0] == t[1];
        }
        auto r = a.signature().index_of(rel);
        if (! r)
            throw LogicError("unknown relation '" + rel + "'");
        if (a.signature().arity(*r) != static_cast<int>(t.size()))
            throw LogicError("arity mismatch for '" + rel + "'");
        return a.holds(*r, t);
    }

    template <typename Pred>
    auto count_witnesses(const Structure& a, Assignment asg, int var, Pred&& holds) -> int
    {
        if (var >= static_cast<int>(asg.size()))
            asg.resize(var + 1, -1);
        int count = 0;
        for (int x = 0; x < a.size(); ++x) {
            asg[var] = x;
            if (holds(asg))
                ++count;
        }
        return count;
    }

    auto check(const Structure& a, const Assignment& asg, const Formula& f) -> bool
    {
        switch (f.kind) {
        case Kind::atom: return atom_holds(a, asg, f.relation, f.args);
        case Kind::negated_atom: return ! atom_holds(a, asg, f.relation, f.args);
        case Kind::disjunction:
            return std::any_of(f.parts.begin(), f.parts.end(), [&](const Formula& p) { return check(a, asg, p); });
        case Kind::conjunction:
            return std::all_of(f.parts.begin(), f.parts.end(), [&](const Formula& p) { return check(a, asg, p); });
        default: {
            int n = count_witnesses(a, asg, f.var, [&](const Assignment& g) { return check(a, g, f.body()); });
            return f.kind == Kind::at_most ? n <= f.bound : n >= f.bound;
        }
        }
    }

    auto check(const Structure& a, const Assignment& asg, const TFormula& f) -> bool
    {
        auto all = [&](const std::vector<TFormula>& fs) {
            return std::all_of(fs.begin(), fs.end(), [&](const TFormula& p) { return check(a, asg, p); });
        };
        switch (f.kind) {
        case TKind::atom: return atom_holds(a, asg, f.relation, f.args);
        case TKind::negated_atom: return ! atom_holds(a, asg, f.relation, f.args);
        case TKind::disjunction:
            return std::any_of(f.parts.begin(), f.parts.end(), [&](const TFormula& p) { return check(a, asg, p); });
        case TKind::pair: return all(f.free_side) && all(f.sentences);
        case TKind::exact:
            if (! all(f.free_side) || ! all(f.sentences))
                return false;
            return count_witnesses(a, asg, f.var, [&](const Assignment& g) { return check(a, g, f.parts.at(0)); }) == f.count;
        }
        return false;
    }

    auto require_bound(const Assignment& asg, const std::vector<int>& vars) -> void
    {
        for (int v : vars)
            lookup(asg, v);
    }
}

auto model_check(const Structure& a, const Assignment& asg, const Formula& f) -> bool
{
    require_bound(asg, free_variables(f));
    return check(a, asg, f);
}

auto model_check_translated(const Structure& a, const Assignment& asg, const TFormula& f) -> bool
{
    require_bound(asg, free_variables(f));
    return check(a, asg, f);
}

namespace {
    auto t_literal(const Formula& f) -> TFormula
    {
        return { f.kind == Kind::atom ? TKind::atom : TKind::negated_atom, f.relation, f.args, {}, {}, {}, 0, 0 };
    }

    auto t_or(std::vector<TFormula> parts) -> TFormula
    {
        return { TKind::disjunction, {}, {}, std::move(parts), {}, {}, 0, 0 };
    }

    auto t_pair(std::vector<TFormula> xs, std::vector<TFormula> ys) -> TFormula
    {
        return { TKind::pair, {}, {}, {}, std::move(xs), std::move(ys), 0, 0 };
    }

    auto t_exact(int n, int var, std::vector<TFormula> xs, std::vector<TFormula> ys, TFormula body) -> TFormula
    {
        return { TKind::exact, {}, {}, { std::move(body) }, std::move(xs), std::move(ys), n, var };
    }

    auto flatten(const Formula& f, std::vector<Formula>& out) -> void
    {
        if (f.kind == Kind::conjunction)
            for (auto& p : f.parts)
                flatten(p, out);
        else
            out.push_back(f);
    }

    struct Translator {
        int max_universe;

        // Threshold range of a counting quantifier.
        auto range(const Formula& q) const -> std::pair<int, int>
        {
            if (q.kind == Kind::at_most)
                return { 0, q.bound };
            return { q.kind == Kind::exists ? 1 : q.bound, max_universe };
        }

        auto counts(int lo, int hi, int var, const std::vector<TFormula>& xs, const std::vector<TFormula>& ys,
            const TFormula& body) const -> TFormula
        {
            std::vector<TFormula> out;
            for (int m = std::max(lo, 0); m <= hi; ++m)
                out.push_back(t_exact(m, var, xs, ys, body));
            return t_or(std::move(out));
        }

        auto operator()(const Formula& f) const -> TFormula
        {
            switch (f.kind) {
            case Kind::atom:
            case Kind::negated_atom: return t_literal(f);
            case Kind::disjunction: {
                std::vector<TFormula> parts;
                for (auto& p : f.parts)
                    parts.push_back((*this)(p));
                return t_or(std::move(parts));
            }
            case Kind::conjunction: return conjunction(f);
            default: {
                auto [lo, hi] = range(f);
                return counts(lo, hi, f.var, {}, {}, (*this)(f.body()));
            }
            }
        }

        auto conjunction(const Formula& f) const -> TFormula
        {
            std::vector<Formula> members;
            flatten(f, members);
            std::vector<Formula> xs, ys, zs;
            for (auto& m : members) {
                if (is_quantifier_free(m))
                    xs.push_back(m);
                else if (is_sentence(m))
                    ys.push_back(m);
                else
                    zs.push_back(m);
            }
            std::vector<TFormula> tx, ty;
            for (auto& x : xs)
                tx.push_back((*this)(x));
            for (auto& y : ys)
                ty.push_back((*this)(y));
            if (zs.empty())
                return t_pair(std::move(tx), std::move(ty));
            if (zs.size() == 1 && zs.front().kind == Kind::disjunction) {
                // distribute the remaining conjuncts over the disjuncts
                std::vector<TFormula> parts;
                for (auto& d : zs.front().parts) {
                    auto rest = xs;
                    rest.insert(rest.end(), ys.begin(), ys.end());
                    rest.push_back(d);
                    parts.push_back(conjunction(fo::all(std::move(rest))));
                }
                return t_or(std::move(parts));
            }
            int lo = 0, hi = max_universe;
            auto body = normalize(zs.front().parts.empty() ? Formula{} : zs.front().body());
            for (auto& z : zs) {
                if (! is_quantifier(z.kind) || z.var != zs.front().var || normalize(z.body()) != body)
                    throw LogicError("conjunction outside the restricted fragment");
                auto [l, h] = range(z);
                lo = std::max(lo, l);
                hi = std::min(hi, h);
            }
            return counts(lo, hi, zs.front().var, tx, ty, (*this)(zs.front().body()));
        }
    };
}

auto translate_t(const Formula& f, int max_universe) -> TFormula
{
    if (auto r = validate_restricted(f); ! r)
        throw LogicError("not in the restricted fragment at " + r.path + ": " + r.reason);
    return Translator{ max_universe }(f);
}

auto translate_u(const TFormula& f) -> Formula
{
    auto each = [](const std::vector<TFormula>& fs, std::vector<Formula>& out) {
        for (auto& g : fs)
            out.push_back(translate_u(g));
    };
    switch (f.kind) {
    case TKind::atom: return fo::atom(f.relation, f.args);
    case TKind::negated_atom: return fo::natom(f.relation, f.args);
    case TKind::disjunction: {
        std::vector<Formula> parts;
        each(f.parts, parts);
        return fo::any(std::move(parts));
    }
    case TKind::pair: {
        std::vector<Formula> parts;
        each(f.free_side, parts);
        each(f.sentences, parts);
        return fo::all(std::move(parts));
    }
    case TKind::exact: {
        std::vector<Formula> parts;
        each(f.free_side, parts);
        each(f.sentences, parts);
        auto body = translate_u(f.parts.at(0));
        parts.push_back(fo::at_most(f.count, f.var, body));
        parts.push_back(fo::at_least(f.count, f.var, std::move(body)));
        return fo::all(std::move(parts));
    }
    }
    throw LogicError("unknown translated formula");
}

namespace {
    struct Sexp {
        std::string atom;
        std::vector<Sexp> list;
        bool is_list = false;
    };

    class SexpReader {
    public:
        explicit SexpReader(const std::string& text) : text_(text) {}

        auto read_all() -> Sexp
        {
            auto s = read();
            skip();
            if (pos_ != text_.size())
                throw LogicError("trailing input at offset " + std::to_string(pos_));
            return s;
        }

    private:
        auto skip() -> void
        {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }

        auto read() -> Sexp
        {
            skip();
            if (pos_ >= text_.size())
                throw LogicError("unexpected end of formula");
            Sexp s;
            if (text_[pos_] == '(') {
                ++pos_;
                s.is_list = true;
                while (true) {
                    skip();
                    if (pos_ >= text_.size())
                        throw LogicError("unbalanced parentheses");
                    if (text_[pos_] == ')') {
                        ++pos_;
                        return s;
                    }
                    s.list.push_back(read());
                }
            }
            if (text_[pos_] == ')')
                throw LogicError("unexpected ')' at offset " + std::to_string(pos_));
            while (pos_ < text_.size() && ! std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' && text_[pos_] != ')')
                s.atom.push_back(text_[pos_++]);
            return s;
        }

        const std::string& text_;
        std::size_t pos_ = 0;
    };

    auto head(const Sexp& s) -> const std::string&
    {
        if (! s.is_list || s.list.empty() || s.list.front().is_list)
            throw LogicError("expected a form like (name ...)");
        return s.list.front().atom;
    }

    auto variable(const Sexp& s) -> int
    {
        if (s.is_list || s.atom.size() < 2 || s.atom[0] != 'x')
            throw LogicError("expected a variable like x1");
        try {
            std::size_t used = 0;
            int v = std::stoi(s.atom.substr(1), &used);
            if (used != s.atom.size() - 1 || v < 1)
                throw LogicError("bad variable '" + s.atom + "'");
            return v;
        } catch (const std::logic_error&) {
            throw LogicError("bad variable '" + s.atom + "'");
        }
    }

    auto number(const Sexp& s) -> int
    {
        if (s.is_list || s.atom.empty() || ! std::all_of(s.atom.begin(), s.atom.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw LogicError("expected a count");
        return std::stoi(s.atom);
    }

    auto arity_check(const Sexp& s, std::size_t n) -> void
    {
        if (s.list.size() != n)
            throw LogicError("'" + head(s) + "' expects " + std::to_string(n - 1) + " arguments");
    }

    auto to_formula(const Sexp& s) -> Formula
    {
        const auto& h = head(s);
        if (h == "atom" || h == "natom") {
            if (s.list.size() < 2 || s.list[1].is_list)
                throw LogicError("atom needs a relation name");
            std::vector<int> args;
            for (std::size_t i = 2; i < s.list.size(); ++i)
                args.push_back(variable(s.list[i]));
            return h == "atom" ? fo::atom(s.list[1].atom, args) : fo::natom(s.list[1].atom, args);
        }
        if (h == "or" || h == "and") {
            std::vector<Formula> parts;
            for (std::size_t i = 1; i < s.list.size(); ++i)
                parts.push_back(to_formula(s.list[i]));
            return h == "or" ? fo::any(std::move(parts)) : fo::all(std::move(parts));
        }
        if (h == "and-r") {
            // grouped conjunction: each argument is a list of conjuncts
            std::vector<Formula> parts;
            for (std::size_t i = 1; i < s.list.size(); ++i) {
                if (! s.list[i].is_list)
                    throw LogicError("'and-r' expects lists of formulas");
                for (auto& item : s.list[i].list)
                    parts.push_back(to_formula(item));
            }
            return fo::all(std::move(parts));
        }
        if (h == "exists-leq" || h == "exists-geq") {
            arity_check(s, 4);
            auto body = to_formula(s.list[3]);
            return h == "exists-leq" ? fo::at_most(number(s.list[1]), variable(s.list[2]), std::move(body))
                                     : fo::at_least(number(s.list[1]), variable(s.list[2]), std::move(body));
        }
        if (h == "exists") {
            arity_check(s, 3);
            return fo::exists(variable(s.list[1]), to_formula(s.list[2]));
        }
        throw LogicError("unknown form '" + h + "'");
    }

    auto to_translated(const Sexp& s) -> TFormula;

    auto translated_list(const Sexp& s) -> std::vector<TFormula>
    {
        if (! s.is_list)
            throw LogicError("expected a parenthesised list of formulas");
        std::vector<TFormula> out;
        for (auto& item : s.list)
            out.push_back(to_translated(item));
        return out;
    }

    auto to_translated(const Sexp& s) -> TFormula
    {
        const auto& h = head(s);
        if (h == "atom" || h == "natom") {
            auto f = to_formula(s);
            return t_literal(f);
        }
        if (h == "tor") {
            std::vector<TFormula> parts;
            for (std::size_t i = 1; i < s.list.size(); ++i)
                parts.push_back(to_translated(s.list[i]));
            return t_or(std::move(parts));
        }
        if (h == "tand") {
            arity_check(s, 3);
            return t_pair(translated_list(s.list[1]), translated_list(s.list[2]));
        }
        if (h == "count-exact") {
            arity_check(s, 6);
            return t_exact(number(s.list[1]), variable(s.list[2]), translated_list(s.list[3]), translated_list(s.list[4]),
                to_translated(s.list[5]));
        }
        throw LogicError("unknown form '" + h + "'");
    }

    auto args_text(const std::string& rel, const std::vector<int>& args) -> std::string
    {
        std::string out = rel;
        for (int v : args)
            out += " x" + std::to_string(v);
        return out;
    }
}

auto parse_formula(const std::string& text) -> Formula
{
    return to_formula(SexpReader(text).read_all());
}

auto parse_translated(const std::string& text) -> TFormula
{
    return to_translated(SexpReader(text).read_all());
}

auto format_formula(const Formula& f) -> std::string
{
    switch (f.kind) {
    case Kind::atom: return "(atom " + args_text(f.relation, f.args) + ")";
    case Kind::negated_atom: return "(natom " + args_text(f.relation, f.args) + ")";
    case Kind::disjunction:
    case Kind::conjunction: {
        std::string out = f.kind == Kind::disjunction ? "(or" : "(and";
        for (auto& p : f.parts)
            out += " " + format_formula(p);
        return out + ")";
    }
    case Kind::at_most:
    case Kind::at_least:
        return "(" + kind_name(f.kind) + " " + std::to_string(f.bound) + " x" + std::to_string(f.var) + " " + format_formula(f.body()) + ")";
    case Kind::exists: return "(exists x" + std::to_string(f.var) + " " + format_formula(f.body()) + ")";
    }
    return {};
}

auto format_translated(const TFormula& f) -> std::string
{
    auto list = [](const std::vector<TFormula>& fs) {
        std::string out = "(";
        for (std::size_t i = 0; i < fs.size(); ++i)
            out += (i ? " " : "") + format_translated(fs[i]);
        return out + ")";
    };
    switch (f.kind) {
    case TKind::atom: return "(atom " + args_text(f.relation, f.args) + ")";
    case TKind::negated_atom: return "(natom " + args_text(f.relation, f.args) + ")";
    case TKind::disjunction: {
        std::string out = "(tor";
        for (auto& p : f.parts)
            out += " " + format_translated(p);
        return out + ")";
    }
    case TKind::pair: return "(tand " + list(f.free_side) + " " + list(f.sentences) + ")";
    case TKind::exact:
        return "(count-exact " + std::to_string(f.count) + " x" + std::to_string(f.var) + " " + list(f.free_side) + " "
            + list(f.sentences) + " " + format_translated(f.parts.at(0)) + ")";
    }
    return {};
}

} // namespace pebblepath
