#include "pebblepath/certificate.hpp"

#include <map>
#include <set>
#include <sstream>

namespace pebblepath {

namespace {
    auto name_of(const Structure& s, int e) -> std::string
    {
        auto n = s.element_name(e);
        if (n.empty() || n == "-" || n == "?" || n.find_first_of(" \t,;|") != std::string::npos)
            throw GameError("element name '" + n + "' cannot appear in a certificate");
        return n;
    }

    auto element_of(const Structure& s, const std::string& name) -> int
    {
        auto e = s.find_element(name);
        if (! e)
            throw GameError("unknown element '" + name + "'");
        return *e;
    }

    auto split(const std::string& text, char sep) -> std::vector<std::string>
    {
        std::vector<std::string> out;
        std::string cur;
        for (char c : text) {
            if (c == sep) {
                out.push_back(cur);
                cur.clear();
            } else if (c != ' ' && c != '\t') {
                cur.push_back(c);
            }
        }
        out.push_back(cur);
        return out;
    }

    // "-" is the empty list
    auto join(const Structure& s, const std::vector<int>& xs, bool partial) -> std::string
    {
        if (xs.empty())
            return "-";
        std::string out;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i)
                out += ',';
            out += partial && xs[i] < 0 ? "-" : name_of(s, xs[i]);
        }
        return out;
    }

    auto parse_list(const Structure& s, const std::string& text, bool partial) -> std::vector<int>
    {
        std::vector<int> out;
        if (text == "-" && ! partial)
            return out;
        for (auto& item : split(text, ','))
            out.push_back(partial && item == "-" ? -1 : element_of(s, item));
        return out;
    }

    auto header(std::ostringstream& out, const std::string& game, int k) -> void
    {
        out << "game " << game << "\nk " << k << "\n";
    }

    struct Parsed {
        std::map<std::string, std::string> fields;
        std::vector<std::pair<std::string, std::string>> body;   // keyword, rest of line
    };

    auto parse(const std::string& text) -> Parsed
    {
        static const std::set<std::string> header_keys{ "game", "k", "equality", "max-len", "winner", "hidden", "search" };
        Parsed p;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            auto start = line.find_first_not_of(" \t\r");
            if (start == std::string::npos || line[start] == '#')
                continue;
            line = line.substr(start);
            while (! line.empty() && (line.back() == '\r' || line.back() == ' '))
                line.pop_back();
            auto space = line.find(' ');
            auto key = line.substr(0, space);
            auto rest = space == std::string::npos ? std::string{} : line.substr(space + 1);
            if (header_keys.contains(key)) {
                if (! p.fields.emplace(key, rest).second)
                    throw GameError("repeated certificate field '" + key + "'");
            } else {
                p.body.emplace_back(key, rest);
            }
        }
        for (auto key : { "game", "k", "winner" })
            if (! p.fields.contains(key))
                throw GameError(std::string("certificate lacks the '") + key + "' field");
        return p;
    }

    auto parse_move(const Structure& a, const std::string& rest, bool allow_hidden) -> Move<int>
    {
        std::istringstream in(rest);
        int p = 0;
        std::string name;
        if (! (in >> p >> name))
            throw GameError("malformed move '" + rest + "'");
        if (allow_hidden && name == "?")
            return { p, -1 };
        return { p, element_of(a, name) };
    }

    auto fail(CertificateCheck c, std::string message) -> CertificateCheck
    {
        c.ok = false;
        c.message = std::move(message);
        return c;
    }

    auto pass(CertificateCheck c, std::string message) -> CertificateCheck
    {
        c.ok = true;
        c.message = std::move(message);
        return c;
    }

    // No response survives every prefix, by enumerating all responses.
    auto no_response_survives(const Structure& a, const Structure& b, int k, const Play& word, MapMode mode) -> bool
    {
        std::vector<int> response(word.size(), 0);
        while (true) {
            std::vector<int> sa(k, -1), sb(k, -1);
            bool alive = true;
            for (std::size_t j = 0; j < word.size() && alive; ++j) {
                sa[word[j].pebble - 1] = word[j].element;
                sb[word[j].pebble - 1] = response[j];
                PartialMap g;
                for (int q = 0; q < k; ++q)
                    if (sa[q] >= 0)
                        g.emplace_back(sa[q], sb[q]);
                alive = is_partial_hom(a, b, g, mode);
            }
            if (alive && is_partial_hom(a, b, {}, mode))
                return false;
            std::size_t i = 0;
            while (i < response.size() && ++response[i] == b.size())
                response[i++] = 0;
            if (i == response.size())
                return true;
        }
    }

    auto verify_aio(const Parsed& p, CertificateCheck c, const Structure& a, const Structure& b, int k) -> CertificateCheck
    {
        if (! p.fields.contains("equality"))
            throw GameError("all-in-one certificate lacks the 'equality' field");
        bool equality = p.fields.at("equality") == "on";
        std::optional<int> max_len;
        if (auto it = p.fields.find("max-len"); it != p.fields.end() && it->second != "none")
            max_len = std::stoi(it->second);
        AllInOneGame game(a, b, k, equality ? MapMode::function : MapMode::relation);
        if (c.winner == Winner::spoiler) {
            Play word;
            for (auto& [key, rest] : p.body) {
                if (key != "move")
                    throw GameError("unexpected line '" + key + "'");
                word.push_back(parse_move(a, rest, false));
            }
            if (max_len && static_cast<int>(word.size()) > *max_len)
                return fail(c, "word longer than the length bound");
            if (! game.replay(word).survivors.empty())
                return fail(c, "replaying the word leaves surviving responses");
            double space = 1;
            for (std::size_t j = 0; j < word.size(); ++j)
                space *= b.size();
            if (space <= 2e6 && ! no_response_survives(a, b, k, word, game.mode()))
                return fail(c, "a response survives under direct enumeration");
            return pass(c, "word of length " + std::to_string(word.size()) + " leaves no surviving response");
        }
        std::map<AllInOneGame::State, int> states;
        for (auto& [key, rest] : p.body) {
            if (key != "state")
                throw GameError("unexpected line '" + key + "'");
            auto bar = rest.find('|');
            if (bar == std::string::npos)
                throw GameError("malformed state line");
            std::istringstream head(rest.substr(0, bar));
            int depth = 0;
            std::string spoiler;
            if (! (head >> depth >> spoiler))
                throw GameError("malformed state line");
            AllInOneGame::State s;
            s.spoiler = parse_list(a, spoiler, true);
            for (auto& item : split(rest.substr(bar + 1), ';'))
                s.survivors.push_back(parse_list(b, item, true));
            std::sort(s.survivors.begin(), s.survivors.end());
            if (s.spoiler.size() != static_cast<std::size_t>(k))
                return fail(c, "state with the wrong number of pebbles");
            states.emplace(std::move(s), depth);
        }
        auto start = states.find(game.initial());
        if (start == states.end() || start->second != 0)
            return fail(c, "initial position missing");
        for (auto& [s, depth] : states) {
            if (s.survivors.empty())
                return fail(c, "a listed state has no survivors");
            if (max_len && depth >= *max_len)
                continue;
            for (int q = 1; q <= k; ++q)
                for (int x = 0; x < a.size(); ++x) {
                    auto it = states.find(game.step(s, q, x));
                    if (it == states.end() || it->second > depth + 1)
                        return fail(c, "state set is not closed under Spoiler's moves");
                }
        }
        return pass(c, std::to_string(states.size()) + " states closed under Spoiler's moves");
    }

    auto verify_dalmau(const Parsed& p, CertificateCheck c, const Structure& a, const Structure& b, int k) -> CertificateCheck
    {
        DalmauGame game(a, b, k);
        if (c.winner == Winner::spoiler) {
            auto config = game.initial();
            for (auto& [key, rest] : p.body) {
                if (key != "domain")
                    throw GameError("unexpected line '" + key + "'");
                std::istringstream in(rest);
                std::vector<int> domain;
                for (std::string name; in >> name;)
                    domain.push_back(element_of(a, name));
                config = game.move(config, domain);
            }
            if (! config.homs.empty())
                return fail(c, "final configuration still has homomorphisms");
            return pass(c, "moves reach a configuration without homomorphisms");
        }
        std::set<DalmauConfig> configs;
        for (auto& [key, rest] : p.body) {
            if (key != "config")
                throw GameError("unexpected line '" + key + "'");
            auto bar = rest.find('|');
            if (bar == std::string::npos)
                throw GameError("malformed config line");
            DalmauConfig d;
            d.domain = parse_list(a, split(rest.substr(0, bar), ';').front(), false);
            for (auto& item : split(rest.substr(bar + 1), ';'))
                d.homs.push_back(parse_list(b, item, false));
            std::sort(d.homs.begin(), d.homs.end());
            configs.insert(std::move(d));
        }
        if (! configs.contains(game.initial()))
            return fail(c, "initial configuration missing");
        for (auto& d : configs) {
            if (d.homs.empty())
                return fail(c, "a listed configuration has no homomorphisms");
            for (auto& m : game.moves(d))
                if (! configs.contains(game.move(d, m)))
                    return fail(c, "configuration set is not closed under Spoiler's moves");
        }
        return pass(c, std::to_string(configs.size()) + " configurations closed under Spoiler's moves");
    }

    auto verify_bijective(const Parsed& p, CertificateCheck c, const Structure& a, const Structure& b, int k)
        -> CertificateCheck
    {
        if (! p.fields.contains("max-len"))
            throw GameError("bijective certificate lacks the 'max-len' field");
        int max_len = std::stoi(p.fields.at("max-len"));
        if (c.winner == Winner::duplicator) {
            auto v = decide_bijective_all_in_one(a, b, k, max_len);
            if (v.winner != Winner::duplicator)
                return fail(c, "re-search finds a Spoiler word");
            return pass(c, "re-search over " + std::to_string(v.words) + " words finds no Spoiler win");
        }
        BijectiveWord w;
        if (auto it = p.fields.find("hidden"); it != p.fields.end())
            w.hidden = std::stoi(it->second);
        for (auto& [key, rest] : p.body) {
            if (key != "move")
                throw GameError("unexpected line '" + key + "'");
            auto m = parse_move(a, rest, true);
            if (m.element < 0) {
                if (static_cast<int>(w.moves.size()) + 1 != w.hidden)
                    throw GameError("'?' outside the hidden position");
                m.element = 0;
            }
            w.moves.push_back(m);
        }
        if (static_cast<int>(w.moves.size()) > max_len)
            return fail(c, "word longer than the length bound");
        if (bijective_answer(a, b, k, w))
            return fail(c, "Duplicator has an answer to the word");
        return pass(c, "Duplicator has no answer to the word");
    }
}

auto aio_certificate(const AioVerdict& v, const Structure& a, const Structure& b, int k, const AioOptions& options)
    -> std::string
{
    std::ostringstream out;
    header(out, "aio", k);
    out << "equality " << (options.equality ? "on" : "off") << "\n";
    out << "max-len " << (options.max_len ? std::to_string(*options.max_len) : "none") << "\n";
    if (v.winner == Winner::spoiler) {
        out << "winner spoiler\n";
        for (auto& m : v.spoiler_word)
            out << "move " << m.pebble << " " << name_of(a, m.element) << "\n";
        return out.str();
    }
    out << "winner duplicator\n";
    for (auto& [s, depth] : v.reachable) {
        out << "state " << depth << " " << join(a, s.spoiler, true) << " |";
        for (std::size_t i = 0; i < s.survivors.size(); ++i)
            out << (i ? " ; " : " ") << join(b, s.survivors[i], true);
        out << "\n";
    }
    return out.str();
}

auto dalmau_certificate(const DalmauVerdict& v, const Structure& a, const Structure& b, int k) -> std::string
{
    std::ostringstream out;
    header(out, "dalmau", k);
    if (v.winner == Winner::spoiler) {
        out << "winner spoiler\n";
        for (auto& d : v.spoiler_moves) {
            out << "domain";
            for (int x : d)
                out << " " << name_of(a, x);
            out << "\n";
        }
        return out.str();
    }
    out << "winner duplicator\n";
    for (auto& c : v.reachable) {
        out << "config " << join(a, c.domain, false) << " |";
        for (std::size_t i = 0; i < c.homs.size(); ++i)
            out << (i ? " ; " : " ") << join(b, c.homs[i], false);
        out << "\n";
    }
    return out.str();
}

auto bijective_certificate(const BijectiveVerdict& v, const Structure& a, int k, int max_len) -> std::string
{
    std::ostringstream out;
    header(out, "bij-aio", k);
    out << "max-len " << max_len << "\n";
    if (v.winner == Winner::duplicator) {
        out << "winner duplicator\nsearch exhaustive\n";
        return out.str();
    }
    out << "winner spoiler\nhidden " << v.spoiler_word.hidden << "\n";
    for (std::size_t i = 0; i < v.spoiler_word.moves.size(); ++i) {
        auto& m = v.spoiler_word.moves[i];
        out << "move " << m.pebble << " "
            << (static_cast<int>(i) + 1 == v.spoiler_word.hidden ? std::string("?") : name_of(a, m.element)) << "\n";
    }
    return out.str();
}

auto verify_certificate(const std::string& text, const Structure& a, const Structure& b) -> CertificateCheck
{
    auto p = parse(text);
    CertificateCheck c;
    c.game = p.fields.at("game");
    int k = std::stoi(p.fields.at("k"));
    auto winner = p.fields.at("winner");
    if (winner != "spoiler" && winner != "duplicator")
        throw GameError("winner must be spoiler or duplicator");
    c.winner = winner == "spoiler" ? Winner::spoiler : Winner::duplicator;
    if (c.game == "aio")
        return verify_aio(p, c, a, b, k);
    if (c.game == "dalmau")
        return verify_dalmau(p, c, a, b, k);
    if (c.game == "bij-aio")
        return verify_bijective(p, c, a, b, k);
    throw GameError("unknown game '" + c.game + "'");
}

} // namespace pebblepath
