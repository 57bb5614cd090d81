#ifndef GCS_TOOLS_CLI_HPP
#define GCS_TOOLS_CLI_HPP

#include <iosfwd>

namespace gcs {

// Entry point of the `gcs` tool, usable in-process. Returns the exit code:
// 0 on success (including batches with per-line errors), 1 on fatal errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcs

#endif  // GCS_TOOLS_CLI_HPP
