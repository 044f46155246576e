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

#include "pcid/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pcid {
namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline void MulHiLo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

}  // namespace

Philox4x32::Counter Philox4x32::Block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kPhiloxM0, ctr[0], hi0, lo0);
    MulHiLo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t path_index,
                     std::uint64_t substream_index)
    : master_seed_(master_seed),
      path_index_(path_index),
      substream_index_(substream_index) {
  if (path_index > 0xFFFFFFFFull || substream_index > 0xFFFFFFFFull) {
    throw std::out_of_range("RngStream: path/substream index exceeds 32 bits");
  }
}

void RngStream::Refill() {
  const Philox4x32::Counter ctr = {
      static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
      static_cast<std::uint32_t>(path_index_),
      static_cast<std::uint32_t>(substream_index_)};
  const Philox4x32::Key key = {static_cast<std::uint32_t>(master_seed_),
                               static_cast<std::uint32_t>(master_seed_ >> 32)};
  const auto out = Philox4x32::Block(ctr, key);
  ++block_;
  buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
  buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
  buffered_ = 2;
}

RngStream::result_type RngStream::operator()() {
  if (buffered_ == 0) Refill();
  return buffer_[2 - buffered_--];
}

double RngStream::Uniform() { return static_cast<double>((*this)() >> 11) * kTwoPow53Inv; }

double RngStream::UniformOpen() {
  return (static_cast<double>((*this)() >> 11) + 0.5) * kTwoPow53Inv;
}

double RngStream::Normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = UniformOpen();
  const double u2 = Uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

double RngStream::Exponential(double rate) { return -std::log(UniformOpen()) / rate; }

double RngStream::Gamma(double shape, double scale) {
  if (shape < 1.0) {
    // Boost to shape + 1 and correct with U^(1/shape).
    const double u = UniformOpen();
    return Gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = Normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = UniformOpen();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

std::uint64_t RngStream::Below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("RngStream::Below: bound must be positive");
  // Reject the top partial bucket so every residue is equally likely.
  const std::uint64_t excess = (max() % bound + 1) % bound;
  const std::uint64_t limit = max() - excess;
  for (;;) {
    const std::uint64_t r = (*this)();
    if (r <= limit) return r % bound;
  }
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t path_index,
                        std::uint64_t substream_index) {
  return RngStream(master_seed, path_index, substream_index);
}

}  // namespace pcid
