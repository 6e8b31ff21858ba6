#pragma once

// Batch driver: executes the experiment named in a run configuration and
// writes CSV artifacts plus a JSON summary. Exit codes: 0 success, 1 invalid
// configuration, 2 numerical failure.

#include <iosfwd>

#include "equijac/config.hpp"

namespace equijac {

int run_experiment(const RunConfig& config, std::ostream& log);

/// `argv`-level entry point used by the CLI binary:
///   run <config-path> | selftest
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace equijac
