#pragma once

namespace irrisim_cli {

/// Full command dispatch; returns the process exit code (0 success, 2 usage,
/// 3 validation, 4 runtime). Callable in-process for testing.
int run_cli(int argc, const char* const* argv);

} // namespace irrisim_cli
