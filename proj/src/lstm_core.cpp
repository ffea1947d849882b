//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/lstm_core.hpp"

#include <algorithm>
#include <string>

namespace rnnfast {

GateRow gate_row(const GateWeights& g, std::size_t neuron) {
  return {g.wx.row(neuron), g.wh.row(neuron), g.bias.at(neuron)};
}

WideAccumulator gate_accumulate(std::span<const Fixed> x, std::span<const Fixed> h, const GateRow& row) {
  if (x.size() != row.wx.size() || h.size() != row.wh.size()) {
    throw DimensionMismatch("gate: expected " + std::to_string(row.wx.size()) + "/" + std::to_string(row.wh.size()) +
                            " inputs, got " + std::to_string(x.size()) + "/" + std::to_string(h.size()));
  }
  WideAccumulator acc;
  for (std::size_t i = 0; i < x.size(); ++i) acc.add_product(row.wx[i], x[i]);
  for (std::size_t i = 0; i < h.size(); ++i) acc.add_product(row.wh[i], h[i]);
  acc.add_fixed(row.bias);
  return acc;
}

namespace {

Fixed tapped(Fixed v, const ActivationTap* tap) { return tap && *tap ? (*tap)(v) : v; }

}  // namespace

CellState lstm_output(const LstmPreact& z, Fixed c_prev, ActivationImpl impl, const ActivationTap* tap) {
  const Fixed i = tapped(sigmoid(z.i, impl), tap);
  const Fixed f = tapped(sigmoid(z.f, impl), tap);
  const Fixed o = tapped(sigmoid(z.o, impl), tap);
  const Fixed g = tapped(tanh_fx(z.c, impl), tap);
  const Fixed c = add(mul(f, c_prev), mul(i, g));
  const Fixed h = mul(o, tapped(tanh_fx(c, impl), tap));
  return {h, c};
}

Fixed gru_output(const GruPreact& z, Fixed h_self, ActivationImpl impl, const ActivationTap* tap) {
  const Fixed u = tapped(sigmoid(z.z, impl), tap);
  const Fixed r = tapped(sigmoid(z.r, impl), tap);
  const Fixed cand = tapped(tanh_fx(add(z.n_x, mul(r, z.n_h)), impl), tap);
  return add(mul(sub(Fixed::one(), u), h_self), mul(u, cand));
}

Fixed vanilla_output(Fixed z, ActivationImpl impl, const ActivationTap* tap) {
  return tapped(tanh_fx(z, impl), tap);
}

CellState lstm_cell_step(std::span<const Fixed> x, std::span<const Fixed> h_prev, Fixed c_prev,
                         const std::array<GateRow, 4>& w, ActivationImpl impl) {
  LstmPreact z;
  z.i = gate_accumulate(x, h_prev, w[0]).narrow();
  z.f = gate_accumulate(x, h_prev, w[1]).narrow();
  z.o = gate_accumulate(x, h_prev, w[2]).narrow();
  z.c = gate_accumulate(x, h_prev, w[3]).narrow();
  return lstm_output(z, c_prev, impl);
}

Fixed gru_cell_step(std::span<const Fixed> x, std::span<const Fixed> h_prev, Fixed h_self,
                    const std::array<GateRow, 3>& w, ActivationImpl impl) {
  GruPreact z;
  z.z = gate_accumulate(x, h_prev, w[0]).narrow();
  z.r = gate_accumulate(x, h_prev, w[1]).narrow();
  const std::vector<Fixed> none;
  const GateRow nx{w[2].wx, {}, w[2].bias};
  const GateRow nh{{}, w[2].wh, Fixed{}};
  z.n_x = gate_accumulate(x, none, nx).narrow();
  z.n_h = gate_accumulate(none, h_prev, nh).narrow();
  return gru_output(z, h_self, impl);
}

Fixed vanilla_cell_step(std::span<const Fixed> x, std::span<const Fixed> h_prev, const GateRow& w,
                        ActivationImpl impl) {
  return vanilla_output(gate_accumulate(x, h_prev, w).narrow(), impl);
}

LayerState layer_step(const LayerWeights& w, std::span<const Fixed> x, const LayerState& prev, ActivationImpl impl) {
  const std::size_t n = w.neurons();
  if (x.size() != w.inputs()) throw DimensionMismatch("layer_step: input width mismatch");
  if (prev.h.size() != n) throw DimensionMismatch("layer_step: hidden width mismatch");
  LayerState next;
  next.h.resize(n);
  next.c.assign(n, Fixed{});
  for (std::size_t j = 0; j < n; ++j) {
    switch (w.cell) {
      case CellType::kLstm: {
        const std::array<GateRow, 4> rows = {gate_row(w.gates[0], j), gate_row(w.gates[1], j),
                                             gate_row(w.gates[2], j), gate_row(w.gates[3], j)};
        const CellState s = lstm_cell_step(x, prev.h, prev.c.at(j), rows, impl);
        next.h[j] = s.h;
        next.c[j] = s.c;
        break;
      }
      case CellType::kGru: {
        const std::array<GateRow, 3> rows = {gate_row(w.gates[0], j), gate_row(w.gates[1], j),
                                             gate_row(w.gates[2], j)};
        next.h[j] = gru_cell_step(x, prev.h, prev.h[j], rows, impl);
        break;
      }
      case CellType::kVanilla:
        next.h[j] = vanilla_cell_step(x, prev.h, gate_row(w.gates[0], j), impl);
        break;
    }
  }
  return next;
}

NetworkOutputs evaluate_network(const NetworkSpec& spec, const NetworkWeights& w, const Sequence& inputs) {
  check_weights(spec, w);
  check_inputs(spec, inputs);
  NetworkOutputs out(spec.layers.size(), Sequence(spec.timesteps));
  std::vector<LayerState> state(spec.layers.size());
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    state[l].h.assign(spec.layers[l].neurons, Fixed{});
    state[l].c.assign(spec.layers[l].neurons, Fixed{});
  }
  for (std::size_t t = 0; t < spec.timesteps; ++t) {
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
      const std::vector<Fixed>& x = l == 0 ? inputs[t] : out[l - 1][t];
      state[l] = layer_step(w.layers[l], x, state[l], spec.activation);
      out[l][t] = state[l].h;
    }
  }
  return out;
}

MacPipeline::MacPipeline(std::uint32_t stages, std::uint32_t cycles_per_stage, std::uint32_t issue_interval)
    : stages_(stages), cycles_per_stage_(cycles_per_stage), interval_(issue_interval) {}

std::uint64_t MacPipeline::issue_term(std::uint64_t cycle, std::int64_t term) {
  if (issues_ > 0 && cycle < last_issue_ + interval_) {
    throw IssueTooSoon("MAC issue at cycle " + std::to_string(cycle) + " before " +
                       std::to_string(last_issue_ + interval_));
  }
  acc_.add_raw(term);
  ++issues_;
  last_issue_ = cycle;
  last_completion_ = cycle + latency();
  return last_completion_;
}

std::uint64_t MacPipeline::issue(std::uint64_t cycle, Fixed a, Fixed b) {
  return issue_term(cycle, wide_product(a, b));
}

std::uint64_t MacPipeline::drain(std::uint64_t cycle) const {
  return std::max(last_completion_, cycle + latency());
}

void MacPipeline::reset() {
  acc_ = WideAccumulator{};
  issues_ = 0;
  last_issue_ = 0;
  last_completion_ = 0;
}

std::uint64_t mac_issue(MacPipeline& pipe, std::uint64_t cycle, Fixed a, Fixed b) { return pipe.issue(cycle, a, b); }

BoothRecoding booth_recode(Fixed multiplier) {
  const std::uint32_t m = multiplier.bits();
  BoothRecoding r;
  int prev = 0;
  for (int i = 0; i < 8; ++i) {
    const int b0 = static_cast<int>((m >> (2 * i)) & 1U);
    const int b1 = static_cast<int>((m >> (2 * i + 1)) & 1U);
    r.digits[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(-2 * b1 + b0 + prev);
    prev = b1;
  }
  return r;
}

std::int64_t booth_product(Fixed multiplicand, const BoothRecoding& rec) {
  const std::int64_t a = multiplicand.raw();
  std::int64_t sum = 0;
  for (int i = 0; i < 8; ++i) {
    std::int64_t pp = 0;
    switch (rec.digits[static_cast<std::size_t>(i)]) {
      case 0: pp = 0; break;
      case 1: pp = a; break;
      case -1: pp = -a; break;
      case 2: pp = a * 2; break;
      case -2: pp = -a * 2; break;
      default: throw std::logic_error("invalid Booth digit");
    }
    sum += pp * (std::int64_t{1} << (2 * i));
  }
  return sum;
}

Fixed booth_multiply(Fixed a, Fixed b) {
  return Fixed::saturate(round_shift_even(booth_product(a, booth_recode(b)), Fixed::kFracBits));
}

int aggregation_hops(std::size_t k) {
  int h = 0;
  while ((std::size_t{1} << h) < k) ++h;
  return h;
}

AggregationRole aggregation_role(std::size_t unit, int round, std::size_t k) {
  const std::size_t stride = std::size_t{1} << round;
  if (unit % stride != 0) return AggregationRole::kIdle;
  if (unit % (2 * stride) == 0) return unit + stride < k ? AggregationRole::kConsume : AggregationRole::kIdle;
  return AggregationRole::kForward;
}

AggregationResult aggregate(std::span<const WideAccumulator> partials) {
  AggregationResult res;
  const std::size_t k = partials.size();
  if (k == 0) return res;
  std::vector<WideAccumulator> held(partials.begin(), partials.end());
  res.hops = aggregation_hops(k);
  for (int round = 0; round < res.hops; ++round) {
    const std::size_t stride = std::size_t{1} << round;
    for (std::size_t u = 0; u < k; ++u) {
      if (aggregation_role(u, round, k) == AggregationRole::kConsume) {
        held[u].add(held[u + stride]);
        ++res.transfers;
      }
    }
  }
  res.sum = held[0];
  return res;
}

FixedAggregation aggregate(std::span<const Fixed> partials) {
  std::vector<WideAccumulator> wide;
  wide.reserve(partials.size());
  for (Fixed p : partials) {
    WideAccumulator w;
    w.add_fixed(p);
    wide.push_back(w);
  }
  const AggregationResult r = aggregate(std::span<const WideAccumulator>(wide));
  return {r.sum.narrow(), r.hops};
}

ChunkRange chunk_range(std::size_t r, std::size_t k, std::size_t u) {
  return {u * r / k, (u + 1) * r / k};
}

}  // namespace rnnfast
