#pragma once

#include <cstdint>
#include <filesystem>

#include <vdw/config.hpp>

namespace vdw {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

// Each command reads its keys from cfg, writes CSV files into out and throws
// ConfigError or a numerical error on failure.
void cmd_phase_diagram(const Config& cfg, const std::filesystem::path& out);
void cmd_relax(const Config& cfg, const std::filesystem::path& out, std::uint64_t seed);
void cmd_eigen(const Config& cfg, const std::filesystem::path& out);
void cmd_euler(const Config& cfg, const std::filesystem::path& out);

// Parses argv, dispatches and maps exceptions to exit codes.
int run_cli(int argc, char** argv);

}  // namespace vdw
