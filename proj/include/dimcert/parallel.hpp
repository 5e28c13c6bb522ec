#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace dimcert {

/// Process-wide worker cap, settable once from the CLI (--jobs).
int worker_count();
void set_worker_count(int jobs);

/// Runs fn(begin, end) over contiguous chunks of [0, n). Chunk boundaries are a
/// pure function of (n, jobs), so any per-chunk output written by index is
/// independent of scheduling order.
void parallel_chunks(int64_t n, const std::function<void(int64_t, int64_t, int)>& fn);

} // namespace dimcert
