#pragma once

#include <iosfwd>

namespace roadrisk::cli {

// Entry point of the `roadrisk` command. Exit codes: 0 success, 1 fatal
// validation or impossible evidence, 2 usage, I/O, parse or bad reference.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace roadrisk::cli
