#pragma once

#include <iosfwd>

namespace mapreel::cli {

enum ExitCode : int { kOk = 0, kInvalid = 1, kIoFailure = 2 };

// Parses argv and runs one subcommand: compile, validate, storyboard, serve.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mapreel::cli
