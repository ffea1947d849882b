//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/fixed_point.hpp"

#include <cmath>
#include <stdexcept>

namespace rnnfast {

Fixed Fixed::from_real(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("from_real: non-finite input");
  const double scaled = x * kOne;
  if (scaled >= kRawMax) return from_raw(kRawMax);
  if (scaled <= kRawMin) return from_raw(kRawMin);
  // nearbyint honours the default round-to-nearest-even mode
  return saturate(static_cast<std::int64_t>(std::nearbyint(scaled)));
}

std::int64_t round_shift_even(std::int64_t v, int shift) {
  if (shift <= 0) return v;
  const std::int64_t q = v >> shift;
  const std::int64_t rem = v - (q << shift);
  const std::int64_t half = std::int64_t{1} << (shift - 1);
  if (rem > half || (rem == half && (q & 1))) return q + 1;
  return q;
}

Fixed add(Fixed a, Fixed b) { return Fixed::saturate(std::int64_t{a.raw()} + b.raw()); }

Fixed sub(Fixed a, Fixed b) { return Fixed::saturate(std::int64_t{a.raw()} - b.raw()); }

Fixed mul(Fixed a, Fixed b) {
  return Fixed::saturate(round_shift_even(wide_product(a, b), Fixed::kFracBits));
}

Fixed neg(Fixed a) { return Fixed::saturate(-std::int64_t{a.raw()}); }

Fixed WideAccumulator::narrow() const {
  return Fixed::saturate(round_shift_even(raw_, Fixed::kFracBits));
}

WideAccumulator mac_accumulate(WideAccumulator acc, Fixed a, Fixed b) {
  acc.add_product(a, b);
  return acc;
}

Fixed narrow(const WideAccumulator& acc) { return acc.narrow(); }

}  // namespace rnnfast
