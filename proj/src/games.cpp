#include "pebblepath/games.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace pebblepath {

namespace {
    auto check_pair(const Structure& a, const Structure& b, int k) -> void
    {
        if (a.signature() != b.signature())
            throw GameError("structures have different signatures");
        if (k < 1)
            throw GameError("at least one pebble is required");
    }

    auto nullary_preserved(const Structure& a, const Structure& b) -> bool
    {
        for (int r = 0; r < a.signature().size(); ++r)
            if (a.signature().arity(r) == 0 && ! a.tuples(r).empty() && ! b.holds(r, Tuple{}))
                return false;
        return true;
    }
}

AllInOneGame::AllInOneGame(Structure a, Structure b, int k, MapMode mode) :
    a_(std::move(a)), b_(std::move(b)), k_(k), mode_(mode)
{
    check_pair(a_, b_, k_);
    tuples_at_.resize(a_.size());
    for (int r = 0; r < a_.signature().size(); ++r)
        for (auto& t : a_.tuples(r)) {
            auto elems = t;
            std::sort(elems.begin(), elems.end());
            elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
            for (int e : elems)
                tuples_at_[e].emplace_back(r, t);
        }
    nullary_ok_ = nullary_preserved(a_, b_);
}

auto AllInOneGame::initial() const -> State
{
    State s;
    s.spoiler.assign(k_, -1);
    if (nullary_ok_)
        s.survivors.push_back(Config(k_, -1));
    return s;
}

auto AllInOneGame::consistent(const Config& spoiler, const Config& image, int pebble) const -> bool
{
    int x = spoiler[pebble - 1];
    int y = image[pebble - 1];
    if (mode_ == MapMode::function)
        for (int q = 0; q < k_; ++q)
            if (spoiler[q] == x && image[q] != y)
                return false;
    std::vector<std::vector<int>> images;
    Tuple probe;
    for (auto& [r, t] : tuples_at_[x]) {
        images.assign(t.size(), {});
        bool covered = true;
        for (std::size_t i = 0; i < t.size() && covered; ++i) {
            for (int q = 0; q < k_; ++q)
                if (spoiler[q] == t[i])
                    images[i].push_back(image[q]);
            covered = ! images[i].empty();
        }
        if (! covered)
            continue;
        std::vector<std::size_t> pick(t.size(), 0);
        probe.assign(t.size(), 0);
        while (true) {
            for (std::size_t i = 0; i < t.size(); ++i)
                probe[i] = images[i][pick[i]];
            if (! b_.holds(r, probe))
                return false;
            std::size_t i = 0;
            while (i < t.size() && ++pick[i] == images[i].size())
                pick[i++] = 0;
            if (i == t.size())
                break;
        }
    }
    return true;
}

auto AllInOneGame::step(const State& s, int pebble, int element) const -> State
{
    if (pebble < 1 || pebble > k_ || element < 0 || element >= a_.size())
        throw GameError("move out of range");
    State next;
    next.spoiler = s.spoiler;
    next.spoiler[pebble - 1] = element;
    std::set<Config> out;
    for (auto c : s.survivors)
        for (int y = 0; y < b_.size(); ++y) {
            c[pebble - 1] = y;
            if (consistent(next.spoiler, c, pebble))
                out.insert(c);
        }
    next.survivors.assign(out.begin(), out.end());
    return next;
}

auto AllInOneGame::replay(const Play& word) const -> State
{
    auto s = initial();
    for (auto& m : word)
        s = step(s, m.pebble, m.element);
    return s;
}

auto AllInOneGame::respond(const Play& word) const -> std::optional<std::vector<int>>
{
    std::vector<State> layers{ initial() };
    for (auto& m : word)
        layers.push_back(step(layers.back(), m.pebble, m.element));
    if (layers.back().survivors.empty())
        return std::nullopt;
    // viable[j]: survivors after j moves that extend to the end of the word
    std::vector<std::set<Config>> viable(word.size() + 1);
    viable.back().insert(layers.back().survivors.begin(), layers.back().survivors.end());
    for (std::size_t j = word.size(); j-- > 0;) {
        int p = word[j].pebble;
        for (auto c : layers[j].survivors) {
            auto original = c;
            for (int y = 0; y < b_.size(); ++y) {
                c[p - 1] = y;
                if (viable[j + 1].contains(c)) {
                    viable[j].insert(original);
                    break;
                }
            }
        }
    }
    std::vector<int> response;
    Config c(k_, -1);
    for (std::size_t j = 0; j < word.size(); ++j) {
        int p = word[j].pebble;
        for (int y = 0; y < b_.size(); ++y) {
            c[p - 1] = y;
            if (viable[j + 1].contains(c))
                break;
        }
        response.push_back(c[p - 1]);
    }
    return response;
}

auto AllInOneGame::is_winning_response(const Play& word, const std::vector<int>& response) const -> bool
{
    if (response.size() != word.size() || ! nullary_ok_)
        return false;
    Config spoiler(k_, -1), image(k_, -1);
    for (std::size_t j = 0; j < word.size(); ++j) {
        auto [p, x] = word[j];
        if (p < 1 || p > k_ || x < 0 || x >= a_.size() || response[j] < 0 || response[j] >= b_.size())
            return false;
        spoiler[p - 1] = x;
        image[p - 1] = response[j];
        if (! consistent(spoiler, image, p))
            return false;
    }
    return true;
}

auto decide_all_in_one(const Structure& a, const Structure& b, int k, const AioOptions& options) -> AioVerdict
{
    auto game = std::make_shared<const AllInOneGame>(a, b, k, options.equality ? MapMode::function : MapMode::relation);
    AioVerdict verdict;
    verdict.game = game;

    struct Node {
        AllInOneGame::State state;
        int depth;
        int parent;
        Move<int> move;
    };
    std::vector<Node> nodes;
    std::map<AllInOneGame::State, int> seen;
    auto spoiler_word = [&](int i) {
        Play word;
        for (; nodes[i].parent >= 0; i = nodes[i].parent)
            word.push_back(nodes[i].move);
        std::reverse(word.begin(), word.end());
        return word;
    };

    nodes.push_back({ game->initial(), 0, -1, { 0, 0 } });
    if (nodes[0].state.survivors.empty()) {
        verdict.winner = Winner::spoiler;
        return verdict;
    }
    seen.emplace(nodes[0].state, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (options.max_len && nodes[i].depth >= *options.max_len)
            continue;
        for (int p = 1; p <= k; ++p)
            for (int x = 0; x < a.size(); ++x) {
                auto next = game->step(nodes[i].state, p, x);
                if (seen.contains(next))
                    continue;
                if (nodes.size() >= options.budget)
                    throw BudgetExceeded("all-in-one game state budget exhausted");
                bool dead = next.survivors.empty();
                seen.emplace(next, static_cast<int>(nodes.size()));
                nodes.push_back({ std::move(next), nodes[i].depth + 1, static_cast<int>(i), { p, x } });
                if (dead) {
                    verdict.winner = Winner::spoiler;
                    verdict.spoiler_word = spoiler_word(static_cast<int>(nodes.size() - 1));
                    return verdict;
                }
            }
    }
    verdict.winner = Winner::duplicator;
    for (auto& n : nodes)
        verdict.reachable.emplace_back(n.state, n.depth);
    auto max_len = options.max_len;
    verdict.strategy = DuplicatorStrategy(
        [game, max_len](const Play& word) -> std::optional<std::vector<int>> {
            if (max_len && static_cast<int>(word.size()) > *max_len)
                return std::nullopt;
            return game->respond(word);
        },
        max_len);
    return verdict;
}

DalmauGame::DalmauGame(Structure a, Structure b, int k) :
    a_(std::move(a)), b_(std::move(b)), k_(k)
{
    check_pair(a_, b_, k_);
}

auto DalmauGame::is_partial_hom_on(const std::vector<int>& domain, const std::vector<int>& image) const -> bool
{
    PartialMap g;
    for (std::size_t i = 0; i < domain.size(); ++i)
        g.emplace_back(domain[i], image[i]);
    return is_partial_hom(a_, b_, g, MapMode::function);
}

auto DalmauGame::initial() const -> DalmauConfig
{
    DalmauConfig c;
    if (nullary_preserved(a_, b_))
        c.homs.push_back({});
    return c;
}

auto DalmauGame::move(const DalmauConfig& c, std::vector<int> domain) const -> DalmauConfig
{
    std::sort(domain.begin(), domain.end());
    if (std::adjacent_find(domain.begin(), domain.end()) != domain.end() || (! domain.empty() && (domain.front() < 0 || domain.back() >= a_.size())))
        throw GameError("invalid domain");
    DalmauConfig next;
    next.domain = domain;
    std::set<std::vector<int>> homs;
    if (std::includes(c.domain.begin(), c.domain.end(), domain.begin(), domain.end())) {
        for (auto& h : c.homs) {
            std::vector<int> restricted;
            for (int x : domain)
                restricted.push_back(h[std::lower_bound(c.domain.begin(), c.domain.end(), x) - c.domain.begin()]);
            homs.insert(std::move(restricted));
        }
    } else if (std::includes(domain.begin(), domain.end(), c.domain.begin(), c.domain.end())) {
        if (static_cast<int>(c.domain.size()) >= k_ || static_cast<int>(domain.size()) > k_)
            throw GameError("blowing move exceeds the pebble bound");
        std::vector<int> fresh;
        std::vector<std::size_t> old_pos;
        for (std::size_t i = 0; i < domain.size(); ++i) {
            auto it = std::lower_bound(c.domain.begin(), c.domain.end(), domain[i]);
            if (it != c.domain.end() && *it == domain[i])
                old_pos.push_back(static_cast<std::size_t>(it - c.domain.begin()));
            else {
                old_pos.push_back(SIZE_MAX);
                fresh.push_back(static_cast<int>(i));
            }
        }
        if (! fresh.empty() && b_.size() == 0)
            return next;
        for (auto& h : c.homs) {
            std::vector<int> image(domain.size());
            for (std::size_t i = 0; i < domain.size(); ++i)
                if (old_pos[i] != SIZE_MAX)
                    image[i] = h[old_pos[i]];
            std::vector<int> pick(fresh.size(), 0);
            while (true) {
                for (std::size_t f = 0; f < fresh.size(); ++f)
                    image[fresh[f]] = pick[f];
                if (is_partial_hom_on(domain, image))
                    homs.insert(image);
                std::size_t f = 0;
                while (f < fresh.size() && ++pick[f] == b_.size())
                    pick[f++] = 0;
                if (f == fresh.size())
                    break;
            }
        }
    } else {
        throw GameError("domain is neither a subset nor a superset");
    }
    next.homs.assign(homs.begin(), homs.end());
    return next;
}

auto DalmauGame::moves(const DalmauConfig& c) const -> std::vector<std::vector<int>>
{
    std::vector<std::vector<int>> out;
    int n = static_cast<int>(c.domain.size());
    for (std::uint32_t mask = 0; mask + 1 < (1u << n); ++mask) {
        std::vector<int> sub;
        for (int i = 0; i < n; ++i)
            if (mask >> i & 1)
                sub.push_back(c.domain[i]);
        out.push_back(std::move(sub));
    }
    if (n < k_) {
        std::vector<int> rest;
        for (int x = 0; x < a_.size(); ++x)
            if (! std::binary_search(c.domain.begin(), c.domain.end(), x))
                rest.push_back(x);
        // grow by up to k - n fresh elements
        std::vector<int> chosen;
        auto grow = [&](auto&& self, std::size_t from) -> void {
            if (! chosen.empty()) {
                auto d = c.domain;
                d.insert(d.end(), chosen.begin(), chosen.end());
                std::sort(d.begin(), d.end());
                out.push_back(std::move(d));
            }
            if (static_cast<int>(chosen.size()) == k_ - n)
                return;
            for (std::size_t i = from; i < rest.size(); ++i) {
                chosen.push_back(rest[i]);
                self(self, i + 1);
                chosen.pop_back();
            }
        };
        grow(grow, 0);
    }
    return out;
}

auto decide_dalmau(const Structure& a, const Structure& b, int k, std::uint64_t budget) -> DalmauVerdict
{
    DalmauGame game(a, b, k);
    DalmauVerdict verdict;
    struct Node {
        DalmauConfig config;
        int parent;
    };
    std::vector<Node> nodes{ { game.initial(), -1 } };
    auto moves_to = [&](int i) {
        std::vector<std::vector<int>> out;
        for (; nodes[i].parent >= 0; i = nodes[i].parent)
            out.push_back(nodes[i].config.domain);
        std::reverse(out.begin(), out.end());
        return out;
    };
    if (nodes[0].config.homs.empty()) {
        verdict.winner = Winner::spoiler;
        return verdict;
    }
    std::set<DalmauConfig> seen{ nodes[0].config };
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (auto& d : game.moves(nodes[i].config)) {
            auto next = game.move(nodes[i].config, d);
            if (! seen.insert(next).second)
                continue;
            if (nodes.size() >= budget)
                throw BudgetExceeded("Dalmau game state budget exhausted");
            bool dead = next.homs.empty();
            nodes.push_back({ std::move(next), static_cast<int>(i) });
            if (dead) {
                verdict.winner = Winner::spoiler;
                verdict.spoiler_moves = moves_to(static_cast<int>(nodes.size() - 1));
                return verdict;
            }
        }
    verdict.winner = Winner::duplicator;
    for (auto& n : nodes)
        verdict.reachable.push_back(n.config);
    return verdict;
}

auto decide_existential_pebble_game(const Structure& a, const Structure& b, int k) -> Winner
{
    check_pair(a, b, k);
    if (b.size() == 0)
        return a.size() == 0 && nullary_preserved(a, b) ? Winner::duplicator : Winner::spoiler;
    // slot value 0 is an unplaced pebble, otherwise 1 + x * |B| + y
    const std::uint64_t base = static_cast<std::uint64_t>(a.size()) * b.size() + 1;
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) {
        total *= base;
        if (total > 50'000'000)
            throw BudgetExceeded("existential pebble game position space too large");
    }
    auto decode = [&](std::uint64_t id) {
        std::vector<int> slots(k);
        for (int i = 0; i < k; ++i, id /= base)
            slots[i] = static_cast<int>(id % base);
        return slots;
    };
    auto encode = [&](const std::vector<int>& slots) {
        std::uint64_t id = 0;
        for (int i = k; i-- > 0;)
            id = id * base + static_cast<std::uint64_t>(slots[i]);
        return id;
    };
    std::vector<char> alive(total);
    for (std::uint64_t id = 0; id < total; ++id) {
        PartialMap g;
        for (int v : decode(id))
            if (v > 0)
                g.emplace_back((v - 1) / b.size(), (v - 1) % b.size());
        alive[id] = is_partial_hom(a, b, g, MapMode::function);
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::uint64_t id = 0; id < total; ++id) {
            if (! alive[id])
                continue;
            auto slots = decode(id);
            bool survives = true;
            for (int p = 0; p < k && survives; ++p) {
                auto next = slots;
                for (int x = 0; x < a.size() && survives; ++x) {
                    bool answered = false;
                    for (int y = 0; y < b.size() && ! answered; ++y) {
                        next[p] = 1 + x * b.size() + y;
                        answered = alive[encode(next)];
                    }
                    survives = answered;
                }
            }
            if (! survives) {
                alive[id] = false;
                changed = true;
            }
        }
    }
    return alive[0] ? Winner::duplicator : Winner::spoiler;
}

} // namespace pebblepath
