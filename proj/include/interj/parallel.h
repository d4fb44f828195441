// Copyright 2026 The interj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef INTERJ_PARALLEL_H_
#define INTERJ_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace interj {

// Calls fn(i) for i in [0, n) on up to `jobs` threads. Work is claimed by
// index, so results written to slot i are independent of the thread count.
// The first exception thrown by any call is rethrown after all threads join.
void ParallelFor(size_t n, int jobs, const std::function<void(size_t)> &fn);

}  // namespace interj

#endif  // INTERJ_PARALLEL_H_
