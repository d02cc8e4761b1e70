#include "betheasep/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <future>
#include <thread>
#include <vector>

namespace betheasep::parallel {

namespace {

std::atomic<std::size_t> g_cap{SIZE_MAX};  // SIZE_MAX = not yet initialized

std::size_t read_env_cap() {
  const char* env = std::getenv("BETHE_ASEP_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 0) return 0;
  return std::size_t(v);
}

std::size_t resolve(std::size_t cap) {
  if (cap == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  return cap;
}

}  // namespace

std::size_t thread_cap() {
  std::size_t c = g_cap.load();
  if (c == SIZE_MAX) {
    c = read_env_cap();
    g_cap.store(c);
  }
  return resolve(c);
}

void set_thread_cap(std::size_t cap) { g_cap.store(cap); }

std::size_t chunk_count(std::size_t count) {
  if (count == 0) return 0;
  return std::min(count, thread_cap());
}

void for_each_chunk(std::size_t count,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  const std::size_t chunks = chunk_count(count);
  if (chunks == 0) return;
  const std::size_t base = count / chunks, extra = count % chunks;
  if (chunks == 1) {
    fn(0, count, 0);
    return;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(chunks);
  std::size_t begin = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t len = base + (c < extra ? 1 : 0);
    const std::size_t end = begin + len;
    futures.push_back(std::async(std::launch::async, fn, begin, end, c));
    begin = end;
  }
  for (auto& f : futures) f.get();
}

}  // namespace betheasep::parallel
