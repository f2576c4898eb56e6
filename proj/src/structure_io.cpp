#include "pebblepath/structure_io.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace pebblepath {

using nlohmann::json;

auto parse_structure(std::string_view text) -> Structure
{
    json doc;
    try {
        doc = json::parse(text);
    }
    catch (const json::parse_error& e) {
        throw StructureError(std::string("malformed structure file: ") + e.what());
    }
    if (! doc.is_object())
        throw StructureError("structure file must be a JSON object");
    for (auto& [key, _] : doc.items())
        if (key != "sigma" && key != "universe" && key != "relations")
            throw StructureError("unknown field '" + key + "'");
    for (auto key : { "sigma", "universe" })
        if (! doc.contains(key))
            throw StructureError(std::string("missing field '") + key + "'");

    auto& sigma = doc["sigma"];
    if (! sigma.is_object())
        throw StructureError("'sigma' must map relation names to arities");
    std::vector<RelationSymbol> symbols;
    for (auto& [name, arity] : sigma.items()) {
        if (! arity.is_number_integer() || arity.get<int>() < 0)
            throw StructureError("bad arity for '" + name + "'");
        symbols.push_back({ name, arity.get<int>() });
    }
    Signature sig(std::move(symbols));

    auto& universe = doc["universe"];
    if (! universe.is_array())
        throw StructureError("'universe' must be a list of names");
    std::vector<std::string> names;
    std::map<std::string, int> index;
    for (auto& e : universe) {
        std::string name = e.is_string() ? e.get<std::string>() : e.dump();
        if (! index.emplace(name, static_cast<int>(names.size())).second)
            throw StructureError("duplicate element '" + name + "'");
        names.push_back(name);
    }

    std::vector<std::vector<Tuple>> relations(sig.size());
    if (doc.contains("relations")) {
        auto& rels = doc["relations"];
        if (! rels.is_object())
            throw StructureError("'relations' must be an object");
        for (auto& [name, tuples] : rels.items()) {
            auto r = sig.index_of(name);
            if (! r)
                throw StructureError("relation '" + name + "' not declared in sigma");
            if (! tuples.is_array())
                throw StructureError("tuples of '" + name + "' must be a list");
            for (auto& t : tuples) {
                if (! t.is_array())
                    throw StructureError("tuple of '" + name + "' must be a list");
                Tuple u;
                for (auto& e : t) {
                    std::string en = e.is_string() ? e.get<std::string>() : e.dump();
                    auto it = index.find(en);
                    if (it == index.end())
                        throw StructureError("element '" + en + "' not in universe");
                    u.push_back(it->second);
                }
                relations[*r].push_back(std::move(u));
            }
        }
    }
    Structure s(sig, static_cast<int>(names.size()), relations);
    s.set_names(std::move(names));
    return s;
}

auto format_structure(const Structure& s) -> std::string
{
    json doc = json::object();
    json sigma = json::object();
    json rels = json::object();
    for (int r = 0; r < s.signature().size(); ++r) {
        auto& sym = s.signature().symbol(r);
        sigma[sym.name] = sym.arity;
        json tuples = json::array();
        for (auto& t : s.tuples(r)) {
            json row = json::array();
            for (int v : t)
                row.push_back(s.element_name(v));
            tuples.push_back(std::move(row));
        }
        rels[sym.name] = std::move(tuples);
    }
    json universe = json::array();
    for (int e = 0; e < s.size(); ++e)
        universe.push_back(s.element_name(e));
    doc["sigma"] = std::move(sigma);
    doc["universe"] = std::move(universe);
    doc["relations"] = std::move(rels);
    return doc.dump(2) + "\n";
}

auto read_text(const std::filesystem::path& file) -> std::string
{
    std::ifstream in(file, std::ios::binary);
    if (! in)
        throw std::runtime_error("cannot open '" + file.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

auto write_text(const std::filesystem::path& file, const std::string& text) -> void
{
    std::ofstream out(file, std::ios::binary);
    if (! out)
        throw std::runtime_error("cannot write '" + file.string() + "'");
    out << text;
}

auto read_structure(const std::filesystem::path& file) -> Structure
{
    return parse_structure(read_text(file));
}

auto write_structure(const std::filesystem::path& file, const Structure& s) -> void
{
    write_text(file, format_structure(s));
}

} // namespace pebblepath
