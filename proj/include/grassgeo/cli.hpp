#pragma once

#include <optional>
#include <string>
#include <vector>

#include "grassgeo/json_io.hpp"

namespace grassgeo::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDimension = 3;

struct RunConfig {
    std::string command;
    Eigen::Index n = 6;
    Eigen::Index k = 2;
    std::uint64_t seed = 0;
    std::optional<double> tol_rank;
    std::optional<double> tol_angle;
    int pairs = 50;                  ///< sample count knob for randomized suites
    std::vector<std::string> inputs; ///< --in, repeatable
    std::string output_path;         ///< --out, empty = stdout
    std::string format = "json";     ///< json | csv
    bool force_fail = false;         ///< inject an absurd tolerance (1e-30)
    std::string oracle_endo = "unitary"; ///< reconstruct ground truth: unitary | antiunitary
};

struct CommandResult {
    Json report;
    int exit_code = kExitOk;
};

Tolerances tolerances_from(const RunConfig& config);

/// Deterministic seed-generated input pair (used when no --in files are
/// given); tests recompute through the same rule.
std::pair<Subspace, Subspace> pair_from_seed(Eigen::Index n, Eigen::Index k,
                                             std::uint64_t seed);

CommandResult run_angles(const RunConfig& config);
CommandResult run_relations(const RunConfig& config);
CommandResult run_graph(const RunConfig& config);
CommandResult run_verify_lemmas(const RunConfig& config);
CommandResult run_reconstruct(const RunConfig& config);
CommandResult run_wild_demo(const RunConfig& config);

/// Dispatch on config.command; maps library errors to exit codes.
CommandResult dispatch(const RunConfig& config);

/// Serialize the report as pretty JSON or CSV.
std::string render(const Json& report, const std::string& format);

} // namespace grassgeo::cli
