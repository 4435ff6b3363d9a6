#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hvr2 {

// Runs the command-line tool on the given arguments (program name excluded).
// Exit codes: 0 = success / expectation met, 1 = a check or expected-verdict
// mismatch, 2 = usage or configuration error.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hvr2
