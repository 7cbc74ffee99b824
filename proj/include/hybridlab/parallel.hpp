// Copyright 2026 the hybridlab authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace hybridlab {

// Number of worker threads used by batch operations. Defaults to the
// hardware concurrency, capped by the HYBRIDLAB_THREADS environment variable.
int worker_threads();

// Runs fn(i) for i in [0, count). Output ordering is up to the caller
// (write into a preallocated slot per index to stay deterministic).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace hybridlab
