//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <limits>

namespace rnnfast {

// 16-bit two's-complement value with 8 fraction bits.
class Fixed {
 public:
  static constexpr int kFracBits = 8;
  static constexpr std::int32_t kOne = 1 << kFracBits;
  static constexpr std::int16_t kRawMax = std::numeric_limits<std::int16_t>::max();
  static constexpr std::int16_t kRawMin = std::numeric_limits<std::int16_t>::min();

  constexpr Fixed() = default;

  static constexpr Fixed from_raw(std::int16_t raw) {
    Fixed f;
    f.raw_ = raw;
    return f;
  }
  static constexpr Fixed saturate(std::int64_t raw) {
    if (raw > kRawMax) return from_raw(kRawMax);
    if (raw < kRawMin) return from_raw(kRawMin);
    return from_raw(static_cast<std::int16_t>(raw));
  }
  static Fixed from_real(double x);
  static constexpr Fixed one() { return from_raw(kOne); }
  static constexpr Fixed half() { return from_raw(kOne / 2); }

  constexpr std::int16_t raw() const { return raw_; }
  constexpr std::uint16_t bits() const { return static_cast<std::uint16_t>(raw_); }
  static constexpr Fixed from_bits(std::uint16_t b) { return from_raw(static_cast<std::int16_t>(b)); }
  double to_real() const { return static_cast<double>(raw_) / kOne; }

  friend constexpr bool operator==(Fixed a, Fixed b) { return a.raw_ == b.raw_; }
  friend constexpr bool operator!=(Fixed a, Fixed b) { return a.raw_ != b.raw_; }

 private:
  std::int16_t raw_ = 0;
};

Fixed add(Fixed a, Fixed b);
Fixed sub(Fixed a, Fixed b);
Fixed mul(Fixed a, Fixed b);
Fixed neg(Fixed a);

// Divide by 2^shift with round-half-to-even.
std::int64_t round_shift_even(std::int64_t v, int shift);

// Exact product of two Q8.8 values, at Q16.16 scale.
constexpr std::int64_t wide_product(Fixed a, Fixed b) {
  return static_cast<std::int64_t>(a.raw()) * b.raw();
}

// Dot-product accumulator at Q16.16 scale. Sums are exact; rounding happens once in narrow().
class WideAccumulator {
 public:
  constexpr WideAccumulator() = default;
  static constexpr WideAccumulator from_raw(std::int64_t raw) {
    WideAccumulator w;
    w.raw_ = raw;
    return w;
  }

  constexpr void add_product(Fixed a, Fixed b) { raw_ += wide_product(a, b); }
  constexpr void add_fixed(Fixed v) { raw_ += static_cast<std::int64_t>(v.raw()) << Fixed::kFracBits; }
  constexpr void add_raw(std::int64_t q16) { raw_ += q16; }
  constexpr void add(const WideAccumulator& o) { raw_ += o.raw_; }

  constexpr std::int64_t raw() const { return raw_; }
  Fixed narrow() const;

  friend constexpr bool operator==(const WideAccumulator& a, const WideAccumulator& b) {
    return a.raw_ == b.raw_;
  }

 private:
  std::int64_t raw_ = 0;
};

WideAccumulator mac_accumulate(WideAccumulator acc, Fixed a, Fixed b);
Fixed narrow(const WideAccumulator& acc);

}  // namespace rnnfast
