//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <vector>

#include "rnnfast/network.hpp"

namespace rnnfast {

using RealVector = std::vector<double>;

struct FloatGate {
  std::vector<RealVector> wx;  // neurons x inputs
  std::vector<RealVector> wh;  // neurons x neurons
  RealVector bias;
};

struct FloatCellParams {
  CellType cell = CellType::kLstm;
  std::vector<FloatGate> gates;

  std::size_t neurons() const { return gates.empty() ? 0 : gates.front().bias.size(); }
  std::size_t inputs() const { return gates.empty() || gates.front().wx.empty() ? 0 : gates.front().wx.front().size(); }
  void validate() const;
};

FloatCellParams to_float(const LayerWeights& w);

struct FloatLstmState {
  RealVector h;
  RealVector c;
};

FloatLstmState float_lstm_step(const RealVector& x, const RealVector& h_prev, const RealVector& c_prev,
                               const FloatCellParams& p);
RealVector float_gru_step(const RealVector& x, const RealVector& h_prev, const FloatCellParams& p);
RealVector float_vanilla_step(const RealVector& x, const RealVector& h_prev, const FloatCellParams& p);

// [layer][timestep][neuron]
using FloatOutputs = std::vector<std::vector<RealVector>>;

FloatOutputs float_network(const NetworkSpec& spec, const std::vector<FloatCellParams>& layers,
                           const std::vector<RealVector>& inputs);
FloatOutputs float_network(const NetworkSpec& spec, const NetworkWeights& w, const Sequence& inputs);

RealVector to_real(const std::vector<Fixed>& v);

}  // namespace rnnfast
