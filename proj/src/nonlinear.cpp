//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/nonlinear.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rnnfast {

std::string_view to_string(ActivationImpl impl) {
  return impl == ActivationImpl::kLut ? "lut" : "approx";
}

ActivationImpl activation_impl_from_string(std::string_view s) {
  if (s == "approx") return ActivationImpl::kApprox;
  if (s == "lut") return ActivationImpl::kLut;
  throw std::invalid_argument("unknown activation '" + std::string(s) + "'");
}

namespace {

// z strictly negative.
std::int32_t sigmoid_negative_raw(std::int32_t r) {
  const std::int32_t n = (-r) >> Fixed::kFracBits;  // |integer part|
  if (n >= 16) return 0;
  const std::int32_t frac = r + (n << Fixed::kFracBits);  // in (-1, 0]
  const std::int32_t v = (frac >> 2) + Fixed::kOne / 2;
  return v >> n;
}

}  // namespace

Fixed sigmoid_approx(Fixed z) {
  const std::int32_t r = z.raw();
  if (r == 0) return Fixed::half();
  if (r < 0) return Fixed::from_raw(static_cast<std::int16_t>(sigmoid_negative_raw(r)));
  // -r fits: r <= 32767
  return Fixed::from_raw(static_cast<std::int16_t>(Fixed::kOne - sigmoid_negative_raw(-r)));
}

Fixed tanh_approx(Fixed z) {
  const Fixed z2 = Fixed::saturate(std::int64_t{z.raw()} * 2);
  const Fixed s = sigmoid_approx(z2);
  return Fixed::saturate(std::int64_t{s.raw()} * 2 - Fixed::kOne);
}

LutTable::LutTable(LutFunction fn) : fn_(fn) {
  const double step = (kHi - kLo) / kSize;
  for (int i = 0; i < kSize; ++i) {
    const double mid = kLo + (i + 0.5) * step;
    const double y = fn == LutFunction::kSigmoid ? sigmoid_exact(mid) : tanh_exact(mid);
    samples_[static_cast<std::size_t>(i)] = Fixed::from_real(y);
  }
}

int LutTable::index_of(Fixed z) {
  // floor((z + 4) / 8 * 64) == (raw + 4*256) >> 5
  int idx = (static_cast<int>(z.raw()) + 4 * Fixed::kOne) >> 5;
  if (idx < 0) idx = 0;
  if (idx > kSize - 1) idx = kSize - 1;
  return idx;
}

Fixed LutTable::lookup(Fixed z) const {
  if (z.raw() <= -4 * Fixed::kOne) {
    return fn_ == LutFunction::kSigmoid ? Fixed{} : Fixed::from_raw(-Fixed::kOne);
  }
  if (z.raw() >= 4 * Fixed::kOne) return Fixed::one();
  return samples_[static_cast<std::size_t>(index_of(z))];
}

const LutTable& sigmoid_table() {
  static const LutTable t(LutFunction::kSigmoid);
  return t;
}

const LutTable& tanh_table() {
  static const LutTable t(LutFunction::kTanh);
  return t;
}

Fixed sigmoid_lut(Fixed z) { return sigmoid_table().lookup(z); }
Fixed tanh_lut(Fixed z) { return tanh_table().lookup(z); }

double sigmoid_exact(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double tanh_exact(double z) { return std::tanh(z); }

Fixed sigmoid(Fixed z, ActivationImpl impl) {
  return impl == ActivationImpl::kLut ? sigmoid_lut(z) : sigmoid_approx(z);
}

Fixed tanh_fx(Fixed z, ActivationImpl impl) {
  return impl == ActivationImpl::kLut ? tanh_lut(z) : tanh_approx(z);
}

}  // namespace rnnfast
