#pragma once

#include "pebblepath/bijective.hpp"
#include "pebblepath/games.hpp"

#include <string>

namespace pebblepath {

// Line-oriented certificate text.  A header names the game and its
// parameters; Spoiler certificates list one move per line, Duplicator
// certificates list a set of positions closed under Spoiler's moves.
auto aio_certificate(const AioVerdict& v, const Structure& a, const Structure& b, int k, const AioOptions& options)
    -> std::string;
auto dalmau_certificate(const DalmauVerdict& v, const Structure& a, const Structure& b, int k) -> std::string;
auto bijective_certificate(const BijectiveVerdict& v, const Structure& a, int k, int max_len) -> std::string;

struct CertificateCheck {
    bool ok = false;
    std::string game;
    Winner winner = Winner::duplicator;
    std::string message;
};

auto verify_certificate(const std::string& text, const Structure& a, const Structure& b) -> CertificateCheck;

} // namespace pebblepath
