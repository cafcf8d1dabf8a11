#pragma once

#include <ostream>

namespace atomec {

// Exit codes: 0 success, 1 usage error, 2 rejected input or failed check.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace atomec
