#pragma once

#include <iosfwd>

namespace lgllv {

/// Entry point of the `lgllv` command-line tool. Returns the process exit
/// code: 0 on success, 1 on usage or runtime errors, 2 when a stationarity
/// run did not converge.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lgllv
