#pragma once

#include <string>
#include <vector>

namespace geoinf::cli {

/// Exit codes: 0 all checks passed, 2 some check failed, 1 usage or runtime error.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

}  // namespace geoinf::cli
