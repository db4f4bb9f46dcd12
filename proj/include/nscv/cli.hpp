#ifndef NSCV_CLI_HPP
#define NSCV_CLI_HPP

#include <string>
#include <vector>

namespace nscv {

// Entry point behind the nscv binary. Exit codes: 0 success, 2 validation
// error, 3 numerical failure, 64 unknown subcommand. Errors are emitted on
// stderr as one JSON object {"stage": ..., "message": ...}.
int dispatch(const std::vector<std::string>& args);

}  // namespace nscv

#endif
