#pragma once

// Batch experiment runner: parses a config file, dispatches to the library,
// and persists CSV results plus a JSON manifest.

namespace cdpath {

// Exit codes: 0 success, 2 malformed config, 1 numerical/runtime failure.
int run_cli(int argc, const char* const* argv);

}  // namespace cdpath
