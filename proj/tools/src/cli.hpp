#pragma once

#include <iosfwd>

namespace betanorm::cli {

/// Runs the command line; returns the process exit code
/// (0 ok, 1 failure, 2 invalid input, 3 budget exhausted).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace betanorm::cli
