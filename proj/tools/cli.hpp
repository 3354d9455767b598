// cli.hpp — Command-line front end: named analysis pipelines emitting CSV/JSON
// artifacts plus a run manifest. Exposed as a library call so tests can drive
// the exact production code path.

#pragma once

#include <string>
#include <vector>

namespace focklab::cli {

// args in natural order, WITHOUT the program name. Returns the process exit
// code: 0 success (manifest written), 2 bad arguments, 3 numeric failure,
// 4 i/o failure.
int run(const std::vector<std::string>& args);

int run(int argc, const char* const* argv);

}  // namespace focklab::cli
