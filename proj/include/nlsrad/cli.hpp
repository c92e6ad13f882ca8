#pragma once

#include <iosfwd>

namespace nlsrad {

// Entry point of the command-line tool. Returns 0 on success, 1 on a
// configuration or precondition error and 2 on a numerical failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nlsrad
