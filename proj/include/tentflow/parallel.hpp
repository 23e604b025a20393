// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace tentflow {

/// Worker count: TENTFLOW_THREADS if set and positive, else hardware concurrency.
int worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Results must be
/// written by index so that output does not depend on scheduling. The first
/// exception thrown by any body is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tentflow
