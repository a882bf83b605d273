#pragma once

#include "platelab/config.hpp"
#include "platelab/errors.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace platelab {

/// Process exit codes.
enum ExitCode { kExitOk = 0, kExitConfig = 2, kExitCertification = 3, kExitResource = 4 };

int exit_code_for(ErrorKind kind);

/// One-line JSON error record {"error": kind, "exit_code": .., "messages": [..]}.
std::string error_record(const Error& e);

/// Output directory: PLATELAB_OUTPUT_DIR when set, else the config's output.
std::filesystem::path output_directory(const ExperimentConfig& cfg);

/// Runs the configured subcommand, writing artifacts into the output
/// directory and a short summary to log. Module errors propagate.
void run(const ExperimentConfig& cfg, std::ostream& log);

} // namespace platelab
