#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trop::cli {

/// Runs one CLI invocation. Returns 0 on success, 1 on a domain error
/// (a JSON error record goes to `err`), 2 on a usage error.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace trop::cli
