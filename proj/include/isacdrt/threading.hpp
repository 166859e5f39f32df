// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 isacdrt contributors

#pragma once

#include <cstddef>
#include <functional>

namespace isacdrt {

/// Runs fn(0..n-1) on up to `jobs` threads with static contiguous chunking.
/// Each index must write only to its own output slot; combined with a
/// sequential final reduction this makes results independent of `jobs`.
/// jobs <= 1 runs inline. Exceptions from workers are rethrown on the caller.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace isacdrt
