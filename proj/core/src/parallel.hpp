// Copyright 2026 The percspin Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PERCSPIN_SRC_PARALLEL_HPP
#define PERCSPIN_SRC_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace percspin::detail {

// Runs fn(i) for i in [0,n) on up to `jobs` threads. Results land in a
// vector indexed by i, so any later reduction is independent of the worker
// count and schedule.
template <typename T, typename Fn>
std::vector<T> ordered_parallel_map(std::int64_t n, int jobs, Fn&& fn) {
  std::vector<T> out(static_cast<std::size_t>(n));
  if (jobs <= 1 || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  const int workers = static_cast<int>(
      std::min<std::int64_t>(jobs, n));
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::int64_t i = next.fetch_add(1);
        if (i >= n || failed.load()) break;
        try {
          out[static_cast<std::size_t>(i)] = fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          break;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failed.load()) std::rethrow_exception(error);
  return out;
}

}  // namespace percspin::detail

#endif  // PERCSPIN_SRC_PARALLEL_HPP
