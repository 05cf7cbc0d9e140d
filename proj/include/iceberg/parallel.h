// Copyright 2026 The iceberg-qec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ICEBERG_PARALLEL_H
#define ICEBERG_PARALLEL_H

#include <cstdint>
#include <functional>
#include <random>

namespace iceberg {

/// Worker count from ICEBERG_WORKERS, else hardware concurrency (at least 1).
size_t default_workers();

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Work items are
/// handed out dynamically; fn must only touch per-item state. The first
/// exception thrown by any item is rethrown after all threads join.
void parallel_for(size_t count, size_t workers, const std::function<void(size_t)> &fn);

/// Seed for shard `shard` of a run seeded with `seed`. Independent of the
/// worker count so results do not depend on parallelism.
uint64_t derive_seed(uint64_t seed, uint64_t stream, uint64_t shard);

}  // namespace iceberg

#endif
