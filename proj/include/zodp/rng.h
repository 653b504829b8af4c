//
// Copyright 2026 The zodp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Keyed random streams. Every draw of a run is addressed by
// (seed, step, index, purpose), so replay never depends on evaluation order.

#ifndef ZODP_RNG_H_
#define ZODP_RNG_H_

#include <cstdint>
#include <random>

namespace zodp {

enum class Purpose : uint64_t {
  kFrame = 1,
  kDirectionalNoise = 2,
  kIsotropicNoise = 3,
  kBatch = 4,
  kDataset = 5,
  kInit = 6,
  kVerify = 7,
};

uint64_t SplitMix64(uint64_t x);

// Hash of the key, used to seed an independent generator.
uint64_t StreamSeed(uint64_t seed, uint64_t step, uint64_t index,
                    Purpose purpose);

std::mt19937_64 MakeStream(uint64_t seed, uint64_t step, uint64_t index,
                           Purpose purpose);

}  // namespace zodp

#endif  // ZODP_RNG_H_
