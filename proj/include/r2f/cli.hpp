#pragma once

#include <string>
#include <vector>

namespace r2f::cli {

// Entry point shared by the r2f binary and the in-process CLI tests. args
// excludes the program name. Returns the process exit code: 0 success,
// 2 invocation/configuration, 3 schema/parse, 4 transport, 5 numeric.
int run_cli(const std::vector<std::string>& args);

}  // namespace r2f::cli
