// commands.hpp: subcommands of the sqlattice tool
//
// Exit codes: 0 success, 1 unexpected failure, 2 invalid input, 3 unstable or dark-mode model,
// 4 non-convergence.

#pragma once

#include "config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sqlat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUnstable = 3;
inline constexpr int kExitConvergence = 4;

struct CommandOptions {
    std::optional<std::filesystem::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out;
    std::optional<std::filesystem::path> input;  // decompose: Bogoliubov or model document
    bool residual{false};
    bool timestamp{true};
};

// Model described by a config: a saved model document, an explicit Hamiltonian, or the construction
// from a target state, bath and chain couplings.
io::ModelDocument resolve_model(const ExperimentConfig& cfg);

int cmd_build(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_steady(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sweep(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_optimize(const CommandOptions& opt, std::ostream& out, std::ostream& err);
int cmd_decompose(const CommandOptions& opt, std::ostream& out, std::ostream& err);

// Parses argv, applies SQLATTICE_THREADS, dispatches and maps exceptions to exit codes.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sqlat::cli
