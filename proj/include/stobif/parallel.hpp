#pragma once

#include <functional>

namespace stobif {

/// Hardware concurrency, at least 1.
int default_workers();

/// Runs fn(0..n-1) across up to `workers` threads (0 means all hardware
/// threads). Tasks must be independent; exceptions propagate to the caller.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

} // namespace stobif
