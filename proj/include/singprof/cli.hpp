#pragma once

#include <iosfwd>

namespace singprof {

// Exit codes: 0 ok, 2 a check failed, 3 usage error, 4 numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace singprof
