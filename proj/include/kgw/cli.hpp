#ifndef KGW_CLI_HPP
#define KGW_CLI_HPP

#include <string>
#include <vector>

namespace kgw {

// Full command-line driver; returns the process exit code:
//   0 success, 1 oracle/acceptance failure, 2 configuration or parse error,
//   3 numerical-domain error.
int run_cli(const std::vector<std::string>& args);

} // namespace kgw

#endif
