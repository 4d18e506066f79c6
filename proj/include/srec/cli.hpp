#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace srec {

// Experiment runner. Subcommands: spectrum, detect, classify, suite,
// returns. Exit codes: 0 completion, 1 input error, 2 internal
// non-convergence. Reports are JSON-lines: one header line (timestamp,
// command) followed by a deterministic body.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace srec
