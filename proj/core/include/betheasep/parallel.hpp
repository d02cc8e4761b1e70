#pragma once

#include <cstddef>
#include <functional>

namespace betheasep::parallel {

/// Thread cap for internal parallelism. 0 means auto (hardware concurrency).
/// Reads BETHE_ASEP_THREADS once; set_thread_cap overrides it for the
/// process.
std::size_t thread_cap();
void set_thread_cap(std::size_t cap);

/// Runs fn(begin, end) over [0, count) split into contiguous chunks, possibly
/// concurrently. Chunk boundaries depend only on count and the thread cap,
/// and callers merge per-chunk results in chunk order, so results are
/// deterministic regardless of scheduling.
void for_each_chunk(std::size_t count,
                    const std::function<void(std::size_t begin, std::size_t end,
                                             std::size_t chunk_index)>& fn);

/// Number of chunks for a given count under the current cap.
std::size_t chunk_count(std::size_t count);

}  // namespace betheasep::parallel
