// Copyright 2026 The cpl-kit Authors
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

#ifndef CPLKIT_PARALLEL_H_
#define CPLKIT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace cplkit {

// Worker count used when a caller passes threads <= 0.
int DefaultThreadCount();

// Runs fn(i) for every i in [0, count) on up to `threads` workers. Units must
// be independent; callers derive per-unit randomness from the unit index so
// the result is the same for any thread count.
void ParallelFor(size_t count, int threads,
                 const std::function<void(size_t)>& fn);

}  // namespace cplkit

#endif  // CPLKIT_PARALLEL_H_
