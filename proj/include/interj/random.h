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

#ifndef INTERJ_RANDOM_H_
#define INTERJ_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace interj {

// Derives an independent sub-seed from a root seed, a stage name and an item
// id, so that the randomness a work item sees does not depend on scheduling.
uint64_t DeriveSeed(uint64_t root, std::string_view stage,
                    std::string_view item = {});
uint64_t DeriveSeed(uint64_t root, std::string_view stage, uint64_t item);

// Portable random source. Distributions are implemented here rather than with
// <random> distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, 1).
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }
  // Uniform integer in [0, n], inclusive. n may be zero.
  uint64_t UniformInt(uint64_t n);
  double Gaussian();

  template <typename T>
  void Shuffle(std::vector<T> *v) {
    for (size_t i = v->size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i - 1));
      std::swap((*v)[i - 1], (*v)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace interj

#endif  // INTERJ_RANDOM_H_
