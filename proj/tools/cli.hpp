#pragma once

#include <iosfwd>

namespace linrel::cli {

/// Exit codes: 0 ok, 1 falsification candidate, 2 input error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace linrel::cli
