// Copyright 2026 The FairCap Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Index-parallel loop with results ordered by index, so output does not
// depend on the worker count or on scheduling.

#ifndef FAIRCAP_PARALLEL_H_
#define FAIRCAP_PARALLEL_H_

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace faircap {

// 0 means one worker per hardware thread.
inline size_t ResolveJobs(size_t jobs) {
  if (jobs != 0) return jobs;
  return std::max<size_t>(1, std::thread::hardware_concurrency());
}

// Calls fn(i) for i in [0, count) on up to `jobs` threads and returns the
// results in index order. If any call throws, the exception from the
// lowest failing index is rethrown after all workers finish.
template <typename Fn>
auto ParallelMap(size_t count, size_t jobs, Fn fn)
    -> std::vector<decltype(fn(size_t{0}))> {
  using Result = decltype(fn(size_t{0}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  const size_t workers = std::min(ResolveJobs(jobs), std::max<size_t>(count, 1));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (std::thread& t : threads) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (std::optional<Result>& slot : slots) out.push_back(std::move(*slot));
  return out;
}

}  // namespace faircap

#endif  // FAIRCAP_PARALLEL_H_
