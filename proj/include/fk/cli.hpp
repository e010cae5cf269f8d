#pragma once

#include <iosfwd>

namespace fk::cli {

// Exit codes: 0 success, 1 usage or I/O error, 2 mathematical failure.
enum Exit { ok = 0, usage = 1, math = 2 };

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace fk::cli
