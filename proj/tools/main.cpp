#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "grassgeo/cli.hpp"

namespace {

void add_common_flags(CLI::App* cmd, grassgeo::cli::RunConfig& config) {
    cmd->add_option("--n", config.n, "ambient dimension");
    cmd->add_option("--k", config.k, "subspace dimension");
    cmd->add_option("--seed", config.seed, "seed for every randomized choice");
    cmd->add_option("--tol-rank", [&config](const std::vector<std::string>& v) {
        config.tol_rank = std::stod(v.front());
        return true;
    }, "relative rank tolerance");
    cmd->add_option("--tol-angle", [&config](const std::vector<std::string>& v) {
        config.tol_angle = std::stod(v.front());
        return true;
    }, "angle tolerance in radians");
    cmd->add_option("--pairs", config.pairs, "sample count for randomized checks");
    cmd->add_option("--in", config.inputs, "input JSON file (repeatable)");
    cmd->add_option("--out", config.output_path, "write the report here instead of stdout");
    cmd->add_option("--format", config.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grassmannian geometry toolkit: principal angles, Grassmann graph "
                 "combinatorics and operator reconstruction"};
    app.require_subcommand(1);

    grassgeo::cli::RunConfig config;

    auto* angles = app.add_subcommand("angles", "principal angles and relations of a pair");
    auto* relations = app.add_subcommand("relations", "relation report for a pair");
    auto* graph = app.add_subcommand("graph", "adjacency graph over a finite vertex family");
    auto* verify = app.add_subcommand("verify-lemmas", "run the randomized verification suite");
    auto* reconstruct =
        app.add_subcommand("reconstruct", "recover the operator behind a subspace map");
    auto* wild = app.add_subcommand("wild-demo",
                                    "orthogonality-preserving but non-induced map at n = 2k");

    for (auto* cmd : {angles, relations, graph, verify, reconstruct, wild})
        add_common_flags(cmd, config);
    verify->add_flag("--force-fail", config.force_fail,
                     "inject tolerance 1e-30 so checks fail (exercises the failure path)");
    reconstruct->add_option("--endo", config.oracle_endo,
                            "ground-truth flavor when generating the oracle")
        ->check(CLI::IsMember({"unitary", "antiunitary"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return grassgeo::cli::kExitUsage;
    }

    config.command = app.get_subcommands().front()->get_name();
    const grassgeo::cli::CommandResult result = grassgeo::cli::dispatch(config);
    const std::string text = grassgeo::cli::render(result.report, config.format);

    if (config.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(config.output_path);
        if (!out) {
            std::cerr << "cannot write to " << config.output_path << "\n";
            return grassgeo::cli::kExitUsage;
        }
        out << text;
    }
    return result.exit_code;
}
