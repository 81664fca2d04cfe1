#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpphase::cli {

// Subcommands: generate | cuts | simulate | sweep | rwre | star | renorm |
// check-conditions. Returns 0 on success, 2 on validation errors (including
// unknown flags), 3 on insufficient data, 4 on budget exhaustion.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpphase::cli
