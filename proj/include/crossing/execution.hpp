#pragma once

namespace crossing {

/// Serial runs are the reference; Parallel must reproduce them bit for bit.
enum class Execution { Serial, Parallel };

/// Caps OpenMP threads from CROSSING_THREADS when it holds a positive integer.
/// Returns the cap in force (0 when the variable is unset or invalid).
int apply_thread_limit_from_env();

}  // namespace crossing
