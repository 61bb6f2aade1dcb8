#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mfs/io.hpp"

namespace mfs::cli {

enum ExitCode : int {
  kExitSuccess = 0,
  kExitInternalError = 1,
  kExitHypothesisViolation = 2,
  kExitConfigInvalid = 3,
};

struct Artifact {
  std::string name;
  std::string content;
};

struct RunConfig {
  std::string command;
  Document document;
  std::filesystem::path base_dir;  // relative paths in the document resolve here
  std::filesystem::path out_dir;
  std::uint64_t seed = 7;
};

/// Reads the document and checks command, out_dir and seed. Command
/// parameters are looked up under "params" first, then at the top level.
/// Throws kConfigInvalid.
RunConfig load_config(const std::filesystem::path& path);

/// Runs the command and returns its artifacts in a fixed order. Nothing is
/// written; log receives progress lines when not null.
std::vector<Artifact> run(const RunConfig& config, std::ostream* log = nullptr);

/// Writes the artifacts and manifest.txt (sha256 and name per line, sorted by name).
void write_artifacts(const std::filesystem::path& out_dir, const std::vector<Artifact>& artifacts);

/// 3 for kConfigInvalid, 2 for violated hypotheses of the requested
/// computation, 1 otherwise.
int exit_code_for(const std::exception& error);

/// Entry point: --config PATH (required), --threads N, --verbose.
int main(int argc, char** argv);

}  // namespace mfs::cli
