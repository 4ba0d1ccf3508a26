#pragma once

namespace osc::cli {

/// Entry point behind the `osc` binary. Returns 0 on success, 2 on usage
/// errors, 1 on data or numeric errors.
int run(int argc, char** argv);

}  // namespace osc::cli
