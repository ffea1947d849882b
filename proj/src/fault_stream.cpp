//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/fault_stream.hpp"

#include <algorithm>

namespace rnnfast {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t stream_key(std::uint64_t seed, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(seed);
  for (std::uint64_t v : parts) h = splitmix64(h ^ splitmix64(v + 0x632BE59BD9B4E019ULL));
  return h;
}

FaultStream::FaultStream(double p, std::uint64_t key) : p_(p), gen_(key) {
  if (p_ <= 0.0) {
    next_ = kNever;
  } else if (p_ >= 1.0) {
    next_ = 0;
  } else {
    gap_ = std::geometric_distribution<std::uint64_t>(p_);
    next_ = gap_(gen_);
  }
}

FaultStream FaultStream::scripted(std::vector<std::uint64_t> events) {
  FaultStream f;
  std::sort(events.begin(), events.end());
  f.script_ = std::move(events);
  f.scripted_ = true;
  f.next_ = f.script_.empty() ? kNever : f.script_.front();
  return f;
}

void FaultStream::advance() {
  if (scripted_) {
    ++script_pos_;
    next_ = script_pos_ < script_.size() ? script_[script_pos_] : kNever;
    return;
  }
  if (p_ >= 1.0) {
    ++next_;
    return;
  }
  const std::uint64_t g = gap_(gen_);
  next_ = (g >= kNever - next_ - 1) ? kNever : next_ + 1 + g;
}

bool FaultStream::fires(std::uint64_t event) {
  while (next_ < event) advance();
  return next_ == event;
}

}  // namespace rnnfast
