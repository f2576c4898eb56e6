#pragma once

#include "pebblepath/structure.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace pebblepath {

// Structure files are JSON objects with exactly the keys "sigma" (name ->
// arity), "universe" (list of element names) and "relations" (name -> list of
// tuples of element names).  Missing relations are empty.
auto parse_structure(std::string_view text) -> Structure;
auto read_structure(const std::filesystem::path& file) -> Structure;

// Sorted keys, tuples in element order, two-space indent, LF endings.
auto format_structure(const Structure& s) -> std::string;
auto write_structure(const std::filesystem::path& file, const Structure& s) -> void;

auto read_text(const std::filesystem::path& file) -> std::string;
auto write_text(const std::filesystem::path& file, const std::string& text) -> void;

} // namespace pebblepath
