//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/reference_oracle.hpp"

#include <cmath>
#include <string>

namespace rnnfast {

namespace {

double sig(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double dot(const RealVector& a, const RealVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void check_dims(const RealVector& x, const RealVector& h, const FloatCellParams& p) {
  if (x.size() != p.inputs()) {
    throw DimensionMismatch("oracle: expected " + std::to_string(p.inputs()) + " inputs, got " +
                            std::to_string(x.size()));
  }
  if (h.size() != p.neurons()) {
    throw DimensionMismatch("oracle: expected " + std::to_string(p.neurons()) + " hidden, got " +
                            std::to_string(h.size()));
  }
}

}  // namespace

void FloatCellParams::validate() const {
  if (gates.size() != gate_count(cell)) throw DimensionMismatch("oracle: gate count mismatch");
  const std::size_t n = neurons();
  const std::size_t in = inputs();
  for (const auto& g : gates) {
    if (g.bias.size() != n || g.wx.size() != n || g.wh.size() != n) throw DimensionMismatch("oracle: gate rows");
    for (const auto& r : g.wx) {
      if (r.size() != in) throw DimensionMismatch("oracle: W_x columns");
      for (double v : r)
        if (!std::isfinite(v)) throw std::invalid_argument("oracle: non-finite weight");
    }
    for (const auto& r : g.wh) {
      if (r.size() != n) throw DimensionMismatch("oracle: W_h columns");
      for (double v : r)
        if (!std::isfinite(v)) throw std::invalid_argument("oracle: non-finite weight");
    }
  }
}

FloatCellParams to_float(const LayerWeights& w) {
  FloatCellParams p;
  p.cell = w.cell;
  for (const auto& g : w.gates) {
    FloatGate fg;
    for (std::size_t r = 0; r < g.wx.rows(); ++r) {
      RealVector row;
      for (Fixed v : g.wx.row(r)) row.push_back(v.to_real());
      fg.wx.push_back(std::move(row));
    }
    for (std::size_t r = 0; r < g.wh.rows(); ++r) {
      RealVector row;
      for (Fixed v : g.wh.row(r)) row.push_back(v.to_real());
      fg.wh.push_back(std::move(row));
    }
    for (Fixed v : g.bias) fg.bias.push_back(v.to_real());
    p.gates.push_back(std::move(fg));
  }
  return p;
}

FloatLstmState float_lstm_step(const RealVector& x, const RealVector& h_prev, const RealVector& c_prev,
                               const FloatCellParams& p) {
  check_dims(x, h_prev, p);
  if (c_prev.size() != p.neurons()) throw DimensionMismatch("oracle: cell state width");
  const std::size_t n = p.neurons();
  FloatLstmState s{RealVector(n), RealVector(n)};
  for (std::size_t j = 0; j < n; ++j) {
    auto pre = [&](std::size_t g) { return dot(p.gates[g].wx[j], x) + dot(p.gates[g].wh[j], h_prev) + p.gates[g].bias[j]; };
    const double i = sig(pre(0));
    const double f = sig(pre(1));
    const double o = sig(pre(2));
    const double g = std::tanh(pre(3));
    s.c[j] = f * c_prev[j] + i * g;
    s.h[j] = o * std::tanh(s.c[j]);
  }
  return s;
}

RealVector float_gru_step(const RealVector& x, const RealVector& h_prev, const FloatCellParams& p) {
  check_dims(x, h_prev, p);
  const std::size_t n = p.neurons();
  RealVector h(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = sig(dot(p.gates[0].wx[j], x) + dot(p.gates[0].wh[j], h_prev) + p.gates[0].bias[j]);
    const double r = sig(dot(p.gates[1].wx[j], x) + dot(p.gates[1].wh[j], h_prev) + p.gates[1].bias[j]);
    const double cand = std::tanh(dot(p.gates[2].wx[j], x) + p.gates[2].bias[j] + r * dot(p.gates[2].wh[j], h_prev));
    h[j] = (1.0 - z) * h_prev[j] + z * cand;
  }
  return h;
}

RealVector float_vanilla_step(const RealVector& x, const RealVector& h_prev, const FloatCellParams& p) {
  check_dims(x, h_prev, p);
  const std::size_t n = p.neurons();
  RealVector h(n);
  for (std::size_t j = 0; j < n; ++j) {
    h[j] = std::tanh(dot(p.gates[0].wx[j], x) + dot(p.gates[0].wh[j], h_prev) + p.gates[0].bias[j]);
  }
  return h;
}

FloatOutputs float_network(const NetworkSpec& spec, const std::vector<FloatCellParams>& layers,
                           const std::vector<RealVector>& inputs) {
  if (layers.size() != spec.layers.size()) throw DimensionMismatch("oracle: layer count mismatch");
  FloatOutputs out(layers.size(), std::vector<RealVector>(inputs.size()));
  std::vector<RealVector> h(layers.size());
  std::vector<RealVector> c(layers.size());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].validate();
    h[l].assign(layers[l].neurons(), 0.0);
    c[l].assign(layers[l].neurons(), 0.0);
  }
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const RealVector& x = l == 0 ? inputs[t] : out[l - 1][t];
      switch (layers[l].cell) {
        case CellType::kLstm: {
          FloatLstmState s = float_lstm_step(x, h[l], c[l], layers[l]);
          h[l] = std::move(s.h);
          c[l] = std::move(s.c);
          break;
        }
        case CellType::kGru: h[l] = float_gru_step(x, h[l], layers[l]); break;
        case CellType::kVanilla: h[l] = float_vanilla_step(x, h[l], layers[l]); break;
      }
      out[l][t] = h[l];
    }
  }
  return out;
}

RealVector to_real(const std::vector<Fixed>& v) {
  RealVector r;
  r.reserve(v.size());
  for (Fixed f : v) r.push_back(f.to_real());
  return r;
}

FloatOutputs float_network(const NetworkSpec& spec, const NetworkWeights& w, const Sequence& inputs) {
  std::vector<FloatCellParams> layers;
  for (const auto& lw : w.layers) layers.push_back(to_float(lw));
  std::vector<RealVector> xs;
  for (const auto& row : inputs) xs.push_back(to_real(row));
  return float_network(spec, layers, xs);
}

}  // namespace rnnfast
