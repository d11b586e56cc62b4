#pragma once

#include <iosfwd>

namespace radfabric::cli {

// Exit codes: 0 success, 1 input error or usage, 2 remote failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radfabric::cli
