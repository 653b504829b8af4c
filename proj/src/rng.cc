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

#include "zodp/rng.h"

namespace zodp {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t StreamSeed(uint64_t seed, uint64_t step, uint64_t index,
                    Purpose purpose) {
  uint64_t h = SplitMix64(seed);
  h = SplitMix64(h ^ step);
  h = SplitMix64(h ^ index);
  return SplitMix64(h ^ static_cast<uint64_t>(purpose));
}

std::mt19937_64 MakeStream(uint64_t seed, uint64_t step, uint64_t index,
                           Purpose purpose) {
  const uint64_t key = StreamSeed(seed, step, index, purpose);
  std::seed_seq seq{static_cast<uint32_t>(key), static_cast<uint32_t>(key >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace zodp
