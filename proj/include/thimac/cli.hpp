#pragma once

#include <ostream>

namespace thimac {

/// Entry point of the `tmc` tool. Exit codes: 0 success, 1 error
/// diagnostics or a failed operation, 2 usage error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace thimac
