//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/network.hpp"

#include <algorithm>
#include <random>

namespace rnnfast {

std::string_view to_string(CellType c) {
  switch (c) {
    case CellType::kLstm: return "lstm";
    case CellType::kGru: return "gru";
    case CellType::kVanilla: return "vanilla";
  }
  return "?";
}

CellType cell_type_from_string(std::string_view s) {
  if (s == "lstm" || s == "LSTM") return CellType::kLstm;
  if (s == "gru" || s == "GRU") return CellType::kGru;
  if (s == "vanilla" || s == "Vanilla" || s == "rnn") return CellType::kVanilla;
  throw std::invalid_argument("unknown cell type '" + std::string(s) + "'");
}

std::size_t gate_count(CellType c) {
  switch (c) {
    case CellType::kLstm: return 4;
    case CellType::kGru: return 3;
    case CellType::kVanilla: return 1;
  }
  return 0;
}

void NetworkSpec::validate() const {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string p = "network.layers[" + std::to_string(l) + "]";
    if (layers[l].neurons == 0) throw ValidationError(p + ".neurons", "must be positive");
    if (layers[l].inputs == 0) throw ValidationError(p + ".inputs", "must be positive");
    if (l > 0 && layers[l].inputs != layers[l - 1].neurons) {
      throw ValidationError(p + ".inputs", "expected " + std::to_string(layers[l - 1].neurons) +
                                               " (previous layer neurons), got " + std::to_string(layers[l].inputs));
    }
  }
}

LayerWeights zero_layer(const LayerSpec& spec) {
  LayerWeights lw;
  lw.cell = spec.cell;
  lw.gates.resize(gate_count(spec.cell));
  for (auto& g : lw.gates) {
    g.wx = Matrix(spec.neurons, spec.inputs);
    g.wh = Matrix(spec.neurons, spec.neurons);
    g.bias.assign(spec.neurons, Fixed{});
  }
  return lw;
}

NetworkWeights zero_weights(const NetworkSpec& spec) {
  NetworkWeights w;
  for (const auto& l : spec.layers) w.layers.push_back(zero_layer(l));
  return w;
}

NetworkWeights random_weights(const NetworkSpec& spec, std::uint64_t seed, double range) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  NetworkWeights w = zero_weights(spec);
  for (auto& layer : w.layers) {
    for (auto& g : layer.gates) {
      for (auto& v : g.wx.data()) v = Fixed::from_real(dist(gen));
      for (auto& v : g.wh.data()) v = Fixed::from_real(dist(gen));
      for (auto& v : g.bias) v = Fixed::from_real(dist(gen));
    }
  }
  return w;
}

Sequence random_inputs(std::size_t timesteps, std::size_t width, std::uint64_t seed, double range) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-range, range);
  Sequence s(timesteps, std::vector<Fixed>(width));
  for (auto& row : s)
    for (auto& v : row) v = Fixed::from_real(dist(gen));
  return s;
}

void check_weights(const NetworkSpec& spec, const NetworkWeights& w) {
  if (w.layers.size() != spec.layers.size()) throw DimensionMismatch("weights: layer count mismatch");
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const LayerSpec& s = spec.layers[l];
    const LayerWeights& lw = w.layers[l];
    const std::string p = "weights.layers[" + std::to_string(l) + "]";
    if (lw.cell != s.cell) throw DimensionMismatch(p + ": cell type mismatch");
    if (lw.gates.size() != gate_count(s.cell)) throw DimensionMismatch(p + ": gate count mismatch");
    for (const auto& g : lw.gates) {
      if (g.wx.rows() != s.neurons || g.wx.cols() != s.inputs || g.wh.rows() != s.neurons ||
          g.wh.cols() != s.neurons || g.bias.size() != s.neurons) {
        throw DimensionMismatch(p + ": gate shape mismatch");
      }
    }
  }
}

void check_inputs(const NetworkSpec& spec, const Sequence& inputs) {
  if (inputs.size() != spec.timesteps) throw DimensionMismatch("inputs: timestep count mismatch");
  if (spec.layers.empty()) return;
  for (const auto& row : inputs) {
    if (row.size() != spec.layers.front().inputs) throw DimensionMismatch("inputs: width mismatch");
  }
}

std::size_t weight_count(const NetworkSpec& spec) {
  std::size_t n = 0;
  for (const auto& l : spec.layers) n += gate_count(l.cell) * l.neurons * (l.inputs + l.neurons + 1);
  return n;
}

std::vector<Fixed> flatten(const NetworkWeights& w) {
  std::vector<Fixed> out;
  for (const auto& layer : w.layers) {
    for (const auto& g : layer.gates) {
      out.insert(out.end(), g.wx.data().begin(), g.wx.data().end());
      out.insert(out.end(), g.wh.data().begin(), g.wh.data().end());
      out.insert(out.end(), g.bias.begin(), g.bias.end());
    }
  }
  return out;
}

NetworkWeights unflatten(const NetworkSpec& spec, std::span<const Fixed> flat) {
  if (flat.size() != weight_count(spec)) throw DimensionMismatch("unflatten: weight count mismatch");
  NetworkWeights w = zero_weights(spec);
  std::size_t pos = 0;
  auto take = [&](std::vector<Fixed>& dst) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()), dst.begin());
    pos += dst.size();
  };
  for (auto& layer : w.layers) {
    for (auto& g : layer.gates) {
      take(g.wx.data());
      take(g.wh.data());
      take(g.bias);
    }
  }
  return w;
}

}  // namespace rnnfast
