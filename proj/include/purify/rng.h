//
// Copyright 2026 The Purify Authors.
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
//

#ifndef PURIFY_RNG_H_
#define PURIFY_RNG_H_

#include <array>
#include <cstdint>

namespace purify {

// Philox4x32-10 block function. Exposed for known-answer tests.
std::array<std::uint32_t, 4> Philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Counter-based random stream. The (seed, stream) pair fully determines the
// output sequence: the seed is the Philox key, the stream id occupies the high
// half of the counter and the low half counts blocks. Two streams with
// different ids never share a block.
//
// Satisfies UniformRandomBitGenerator so it can drive <random> utilities, but
// the library's own samplers (distributions.h) only use operator() so that
// draws are reproducible across standard library implementations.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()();

  // A child stream with the same seed and a stream id derived from
  // (stream(), index). Used to hand independent streams to trials and to the
  // sub-steps of a composite mechanism.
  RngStream Substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  // Number of 64-bit words drawn so far.
  std::uint64_t position() const { return 2 * block_ - buffered_; }

 private:
  void Refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
};

// SplitMix64 finalizer; used for deriving stream ids.
std::uint64_t MixBits(std::uint64_t x);

}  // namespace purify

#endif  // PURIFY_RNG_H_
