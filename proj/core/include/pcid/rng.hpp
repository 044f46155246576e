// Copyright 2026 The pcid Authors
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

#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace pcid {

/// Philox4x32 with 10 rounds (Salmon et al., SC'11). Pure function of
/// (counter, key); no state.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter Block(Counter counter, Key key);
};

/// Well-known substream indices used by the process simulators. Observation
/// draws for coordinate i use substream `kObservationBase + i`.
namespace substream {
inline constexpr std::uint64_t kObservationBase = 0;
inline constexpr std::uint64_t kWeightBase = 1u << 16;
inline constexpr std::uint64_t kCommon = 1u << 20;
inline constexpr std::uint64_t kArrivals = (1u << 20) + 1;
inline constexpr std::uint64_t kLatent = (1u << 20) + 2;
}  // namespace substream

/// Deterministic random stream addressed by (master seed, path, substream).
///
/// The 128-bit Philox counter is laid out as
///   [block index (64 bit) | path index (32 bit) | substream index (32 bit)]
/// and the master seed is the 64-bit key, so two streams never share a
/// counter unless their addresses are equal. Construction is O(1) and
/// stateless with respect to every other stream.
///
/// Satisfies UniformRandomBitGenerator, but the distribution helpers below
/// are the ones the library uses: they are specified bit-for-bit, unlike the
/// <random> distributions.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t path_index,
            std::uint64_t substream_index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double Uniform();
  /// Uniform on the open interval (0, 1).
  double UniformOpen();
  double Uniform(double a, double b) { return a + (b - a) * Uniform(); }
  /// Standard normal via Box-Muller; the second variate is cached.
  double Normal();
  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }
  double Exponential(double rate);
  /// Gamma(shape, scale) via Marsaglia-Tsang.
  double Gamma(double shape, double scale);
  /// Uniform integer in [0, bound).
  std::uint64_t Below(std::uint64_t bound);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t path_index() const { return path_index_; }
  std::uint64_t substream_index() const { return substream_index_; }

 private:
  void Refill();

  std::uint64_t master_seed_;
  std::uint64_t path_index_;
  std::uint64_t substream_index_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 2> buffer_{};
  int buffered_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Returns the stream for (master_seed, path_index, substream_index).
/// Path and substream indices must fit in 32 bits.
RngStream derive_stream(std::uint64_t master_seed, std::uint64_t path_index,
                        std::uint64_t substream_index);

}  // namespace pcid
