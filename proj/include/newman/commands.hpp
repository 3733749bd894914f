// Experiment runners behind the newman_lab subcommands.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "newman/io.hpp"

namespace newman {

inline constexpr std::size_t kLargeSizeLimit = std::size_t{1} << 20;

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides every seed in the config
    unsigned threads = 1;
    bool allow_large = false;
};

/// Files written by one command invocation.
struct RunResult {
    std::vector<std::filesystem::path> outputs;
};

RunResult cmd_reconstruct(const json& config, const RunOptions& opts);
RunResult cmd_sweep(const json& config, const RunOptions& opts);
RunResult cmd_ensemble(const json& config, const RunOptions& opts);
RunResult cmd_optimize(const json& config, const RunOptions& opts);
RunResult cmd_extremal(const json& config, const RunOptions& opts);

/// Dispatch by subcommand name; unknown names are a ConfigError.
RunResult run_command(std::string_view command, const json& config, const RunOptions& opts);

enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2 };

/// Thread count from NEWMAN_LAB_THREADS, else hardware concurrency.
unsigned default_thread_count();

}  // namespace newman
