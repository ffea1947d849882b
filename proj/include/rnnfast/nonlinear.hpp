//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <string_view>

#include "rnnfast/fixed_point.hpp"

namespace rnnfast {

enum class ActivationImpl { kApprox, kLut };
enum class LutFunction { kSigmoid, kTanh };

std::string_view to_string(ActivationImpl impl);
ActivationImpl activation_impl_from_string(std::string_view s);

// Shift-and-add sigmoid built from the integer and fraction parts of z.
Fixed sigmoid_approx(Fixed z);
// 2 * sigmoid_approx(2z) - 1.
Fixed tanh_approx(Fixed z);

// 64 midpoint samples over [-4, 4).
class LutTable {
 public:
  static constexpr int kSize = 64;
  static constexpr double kLo = -4.0;
  static constexpr double kHi = 4.0;

  explicit LutTable(LutFunction fn);

  LutFunction function() const { return fn_; }
  const std::array<Fixed, kSize>& samples() const { return samples_; }
  static int index_of(Fixed z);
  Fixed lookup(Fixed z) const;

 private:
  LutFunction fn_;
  std::array<Fixed, kSize> samples_{};
};

const LutTable& sigmoid_table();
const LutTable& tanh_table();

Fixed sigmoid_lut(Fixed z);
Fixed tanh_lut(Fixed z);

double sigmoid_exact(double z);
double tanh_exact(double z);

Fixed sigmoid(Fixed z, ActivationImpl impl);
Fixed tanh_fx(Fixed z, ActivationImpl impl);

}  // namespace rnnfast
