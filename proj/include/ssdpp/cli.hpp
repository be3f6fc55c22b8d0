#pragma once

#include <iosfwd>

namespace ssdpp {

// Exit codes: 0 success, 1 failed verification or internal error, 2 bad configuration or data,
// 3 input/output failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ssdpp
