#pragma once

#include <iosfwd>

namespace hybridcast {

/// Runs one subcommand. Returns 0 on success, 1 on a usage or configuration error and 2 when the
/// input data is rejected.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hybridcast
