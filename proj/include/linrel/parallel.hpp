#pragma once

#include <cstddef>
#include <functional>

namespace linrel {

/// Worker count: LINREL_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
[[nodiscard]] unsigned worker_count();

/// Calls body(i) for i in [0, n). Work is split across worker_count()
/// threads; calls made from inside a worker run serially. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace linrel
