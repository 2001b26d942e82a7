// Command-line front end: kernel / flow / metric / embed / verify.
//
// Exit codes: 0 success, 1 check failure, 2 usage error.  The environment
// variable FLOWCUBE_SEED overrides the default seed; an explicit --seed flag
// overrides both.  Every JSON artifact embeds the resolved run configuration
// and seed, so a saved config reproduces a run exactly.

#pragma once

#include <string>
#include <vector>

namespace flowcube::cli {

/// Runs one subcommand; args exclude the program name.
int dispatch(const std::vector<std::string>& args);

}  // namespace flowcube::cli
