#ifndef HALFWAVE_CLI_HPP
#define HALFWAVE_CLI_HPP

#include <string>
#include <vector>

namespace halfwave::cli {

/// Run one subcommand.  Exit codes: 0 success, 1 failed verification,
/// 2 usage/configuration error.  All files are written under --output-dir.
int dispatch(const std::vector<std::string>& args);

}  // namespace halfwave::cli

#endif
