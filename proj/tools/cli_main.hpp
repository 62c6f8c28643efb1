#pragma once

namespace discenv::cli {

/// Entry point of discenv-cli. Exit codes: 0 success, 1 criterion failure,
/// 2 validation error, 3 numeric failure.
int cli_main(int argc, char** argv);

} // namespace discenv::cli
