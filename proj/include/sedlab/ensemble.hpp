#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace sedlab {

/// Worker count: `requested` when nonzero, else SEDLAB_JOBS, else the
/// hardware concurrency (at least 1).
unsigned resolve_jobs(unsigned requested);

/// Runs map(k) for k in [0, count) on up to `jobs` threads and hands each
/// result to reduce(k, result) strictly in index order.  Members are
/// processed in blocks so at most a few results are alive at once; the
/// reduction sequence, and therefore every floating-point sum, does not
/// depend on `jobs`.  The exception of the lowest failing index is rethrown.
template <class Map, class Reduce>
void ensemble_reduce(std::size_t count, unsigned jobs, Map&& map, Reduce&& reduce) {
  using Result = std::decay_t<std::invoke_result_t<Map&, std::size_t>>;
  jobs = std::max(1u, jobs);
  const std::size_t block = std::max<std::size_t>(1, 2 * static_cast<std::size_t>(jobs));
  for (std::size_t start = 0; start < count; start += block) {
    const std::size_t len = std::min(block, count - start);
    std::vector<std::optional<Result>> results(len);
    std::vector<std::exception_ptr> errors(len);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= len) return;
        try {
          results[i].emplace(map(start + i));
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(jobs, len));
    if (threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      reduce(start + i, std::move(*results[i]));
    }
  }
}

}  // namespace sedlab
