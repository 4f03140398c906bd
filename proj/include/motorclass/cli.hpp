#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace motorclass::cli {

/// Entry point behind the `motorclass` executable. Returns the process exit status:
/// 0 success, 1 usage, 2 data error, 3 numeric failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace motorclass::cli
