#pragma once

#include <iosfwd>

namespace rumor::cli {

/// Runs the command line tool. Returns 0 on success, 1 on a usage error
/// and 2 on a data or validation error; messages go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rumor::cli
