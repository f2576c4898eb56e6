#include "pebblepath/bijective.hpp"
#include "pebblepath/certificate.hpp"
#include "pebblepath/comonad.hpp"
#include "pebblepath/decomposition.hpp"
#include "pebblepath/games.hpp"
#include "pebblepath/logic.hpp"
#include "pebblepath/lovasz.hpp"
#include "pebblepath/structure_io.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace pebblepath;

namespace {

auto winner_name(Winner w) -> const char* { return w == Winner::spoiler ? "spoiler" : "duplicator"; }

auto element_named(const Structure& a, const std::string& name) -> int
{
    for (int x = 0; x < a.size(); ++x)
        if (a.element_name(x) == name)
            return x;
    throw StructureError("no element named '" + name + "'");
}

// "x3=a" -> (3, a)
auto parse_binding(const std::string& text, const Structure& a) -> std::pair<int, int>
{
    auto eq = text.find('=');
    if (eq == std::string::npos || eq < 2 || text[0] != 'x')
        throw LogicError("assignment must look like x1=name, got '" + text + "'");
    int var = std::stoi(text.substr(1, eq - 1));
    if (var < 1)
        throw LogicError("variables are numbered from 1");
    return { var, element_named(a, text.substr(eq + 1)) };
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{ "Pebble-relation comonad toolkit" };
    app.require_subcommand(1);

    int k = 2, n = 2;
    std::string in, out, a_path, b_path, cert, formula_path, vector_path, game;
    std::optional<int> max_len;
    std::vector<std::string> bindings;
    int max_size = 4;

    auto* build = app.add_subcommand("build-pr", "write PR_{k,n} of a structure");
    build->add_option("--k", k, "pebbles")->required()->check(CLI::PositiveNumber);
    build->add_option("--n", n, "maximum play length")->required()->check(CLI::PositiveNumber);
    build->add_option("--in", in, "input structure")->required()->check(CLI::ExistingFile);
    build->add_option("--out", out, "output structure")->required();

    auto* pw = app.add_subcommand("pathwidth", "exact pathwidth and coalgebra number");
    pw->add_option("--in", in, "input structure")->required()->check(CLI::ExistingFile);
    pw->add_option("--certificate", out, "write the path decomposition here");

    auto* decide = app.add_subcommand("decide", "decide a pebble game");
    decide->add_option("--game", game, "aio, dalmau or bij-aio")
        ->required()
        ->check(CLI::IsMember({ "aio", "dalmau", "bij-aio" }));
    decide->add_option("--k", k, "pebbles")->required()->check(CLI::PositiveNumber);
    decide->add_option("--max-len", max_len, "bound on Spoiler's word (bij-aio defaults to 3)");
    decide->add_option("--a", a_path, "left structure")->required()->check(CLI::ExistingFile);
    decide->add_option("--b", b_path, "right structure")->required()->check(CLI::ExistingFile);
    decide->add_option("--cert", cert, "write a certificate here");

    auto* verify = app.add_subcommand("verify-cert", "re-check a game certificate");
    verify->add_option("--cert", cert, "certificate file")->required()->check(CLI::ExistingFile);
    verify->add_option("--a", a_path, "left structure")->required()->check(CLI::ExistingFile);
    verify->add_option("--b", b_path, "right structure")->required()->check(CLI::ExistingFile);

    auto* check = app.add_subcommand("model-check", "evaluate a formula");
    check->add_option("--in", in, "structure")->required()->check(CLI::ExistingFile);
    check->add_option("--formula", formula_path, "formula file")->required()->check(CLI::ExistingFile);
    check->add_option("--assign", bindings, "x1=name, repeatable");

    auto* lovasz = app.add_subcommand("lovasz", "compare hom counts from structures of bounded pathwidth");
    lovasz->add_option("--k", k, "pathwidth bound is k - 1")->required()->check(CLI::PositiveNumber);
    lovasz->add_option("--max-size", max_size, "largest test structure")->required()->check(CLI::Range(0, 9));
    lovasz->add_option("--a", a_path, "left structure")->required()->check(CLI::ExistingFile);
    lovasz->add_option("--b", b_path, "right structure")->required()->check(CLI::ExistingFile);
    lovasz->add_option("--emit-vector", vector_path, "write the hom vectors as TSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            auto a = read_structure(in);
            auto pr = build_pr(a, k, n);
            write_structure(out, pr_as_named_structure(pr, a));
            std::cout << "elements " << pr.structure.size() << '\n';
            return 0;
        }
        if (*pw) {
            auto a = read_structure(in);
            auto result = pathwidth_exact(a);
            auto kappa = coalgebra_number(a);
            std::cout << "pathwidth " << result.width << "\ncoalgebra-number " << kappa.k << '\n';
            if (! out.empty())
                write_text(out, format_pd(result.certificate, a));
            return 0;
        }
        if (*decide) {
            auto a = read_structure(a_path);
            auto b = read_structure(b_path);
            std::string text;
            Winner w;
            if (game == "aio") {
                AioOptions options;
                options.max_len = max_len;
                auto v = decide_all_in_one(a, b, k, options);
                w = v.winner;
                if (! cert.empty())
                    text = aio_certificate(v, a, b, k, options);
            } else if (game == "dalmau") {
                auto v = decide_dalmau(a, b, k);
                w = v.winner;
                if (! cert.empty())
                    text = dalmau_certificate(v, a, b, k);
            } else {
                int len = max_len.value_or(3);
                auto v = decide_bijective_all_in_one(a, b, k, len);
                w = v.winner;
                if (! cert.empty())
                    text = bijective_certificate(v, a, k, len);
            }
            if (! cert.empty())
                write_text(cert, text);
            std::cout << "winner " << winner_name(w) << '\n';
            return 0;
        }
        if (*verify) {
            auto result = verify_certificate(read_text(cert), read_structure(a_path), read_structure(b_path));
            std::cout << (result.ok ? "valid " : "invalid ") << result.game << ' ' << winner_name(result.winner);
            if (! result.message.empty())
                std::cout << ": " << result.message;
            std::cout << '\n';
            return result.ok ? 0 : 1;
        }
        if (*check) {
            auto a = read_structure(in);
            auto f = parse_formula(read_text(formula_path));
            Assignment asg(static_cast<std::size_t>(max_variable(f)) + 1, -1);
            for (auto& text : bindings) {
                auto [var, element] = parse_binding(text, a);
                if (var >= static_cast<int>(asg.size()))
                    asg.resize(static_cast<std::size_t>(var) + 1, -1);
                asg[var] = element;
            }
            for (int v : free_variables(f))
                if (asg[v] < 0)
                    throw LogicError("free variable x" + std::to_string(v) + " has no assignment");
            std::cout << (model_check(a, asg, f) ? "true" : "false") << '\n';
            return 0;
        }
        if (*lovasz) {
            auto a = read_structure(a_path);
            auto b = read_structure(b_path);
            auto v = lovasz_equiv(a, b, k, max_size);
            if (v.equivalent)
                std::cout << "equivalent over " << v.entries.size() << " test structures\n";
            else
                std::cout << "distinguished by " << v.distinguishing->id << ": " << v.count_a << " vs " << v.count_b << '\n';
            if (! vector_path.empty())
                write_text(vector_path, format_hom_vectors(v));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
