#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace flakyfix {

/// Runs one command line (without the program name). Returns 0 on success,
/// 1 on a domain error and 2 on a usage error. Every parsed invocation writes
/// a run manifest, including failed ones.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flakyfix
