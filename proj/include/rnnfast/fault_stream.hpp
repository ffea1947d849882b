//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <vector>

namespace rnnfast {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts);

// Bernoulli(p) per event index, drawn as geometric gaps from a keyed generator.
// Queries must use nondecreasing event indices; skipping indices is allowed.
class FaultStream {
 public:
  static constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

  FaultStream() = default;
  FaultStream(double p, std::uint64_t key);
  // Fires exactly at the listed event indices.
  static FaultStream scripted(std::vector<std::uint64_t> events);

  bool fires(std::uint64_t event);
  std::uint64_t next_fault() const { return next_; }

 private:
  void advance();

  double p_ = 0.0;
  std::vector<std::uint64_t> script_;
  std::size_t script_pos_ = 0;
  bool scripted_ = false;
  std::mt19937_64 gen_;
  std::geometric_distribution<std::uint64_t> gap_;
  std::uint64_t next_ = kNever;
};

}  // namespace rnnfast
