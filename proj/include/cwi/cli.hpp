#ifndef CWI_CLI_HPP
#define CWI_CLI_HPP

namespace cwi {

// Entry point for the cwi tool. Exit codes: 0 success, 1 usage error,
// 2 data/resource error. Degraded-mode warnings go to standard error.
int run_cli(int argc, const char* const* argv);

}  // namespace cwi

#endif  // CWI_CLI_HPP
