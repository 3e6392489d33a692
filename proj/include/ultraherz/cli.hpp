#pragma once

#include <ostream>

namespace ultraherz {

/// Runs the `ultraherz` command line. Exit codes: 0 success, 2 hypothesis
/// violation (or failed check), 1 any other error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ultraherz
