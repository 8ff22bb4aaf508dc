#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hpq::cli {

/// Exit codes: 0 success, 1 a check failed, 2 usage error or malformed input.
int run(int argc, char** argv);
/// Same, with args excluding the program name; the report goes to `out` unless --output is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hpq::cli
