//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/simulator.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <string>

#include "rnnfast/lstm_core.hpp"
#include "rnnfast/racetrack.hpp"

namespace rnnfast {

namespace {

std::uint32_t activation_stages(CellType c) { return c == CellType::kVanilla ? 1 : 2; }

std::uint64_t nonlinear_evals(CellType c) {
  switch (c) {
    case CellType::kLstm: return 5;
    case CellType::kGru: return 3;
    case CellType::kVanilla: return 1;
  }
  return 0;
}

// Partial words a unit forwards: LSTM i f o c, GRU z r n_x n_h, Vanilla h.
std::size_t partial_words(CellType c) { return c == CellType::kVanilla ? 1 : 4; }

struct ChainPass {
  std::vector<std::vector<Fixed>> words;  // [member][step]
  std::vector<std::uint64_t> cycle;        // [step]
  std::vector<std::size_t> start_index;    // [member]
};

struct PathSpec {
  std::span<const Fixed> row;
  std::size_t lo = 0;
  std::size_t hi = 0;
  bool bias = false;
  Fixed bias_value;
};

class Engine {
 public:
  Engine(const Placement& p, const NetworkWeights& w, const ErrorConfig& cfg, const SimOptions& opts, RunResult& res)
      : p_(p), hw_(p.hw), w_(w), cfg_(cfg), trace_(opts.trace), res_(res) {
    chain_faults_ = cfg.active() && cfg.site(FaultSite::kInputChains);
    weight_faults_ = cfg.active() && cfg.site(FaultSite::kWeightArrays);
    logic_faults_ = cfg.active() && cfg.site(FaultSite::kLogic);
    wopts_.edc = cfg.edc_weights;
    wopts_.fault_bits = region_bits(cfg.region);
  }

  void run(const Sequence& inputs) {
    const std::size_t nl = p_.layers.size();
    const std::size_t nt = p_.spec.timesteps;
    res_.outputs.assign(nl, Sequence(nt));
    res_.start_cycle.assign(nl, std::vector<std::uint64_t>(nt, 0));
    res_.end_cycle.assign(nl, std::vector<std::uint64_t>(nt, 0));
    std::vector<std::vector<Fixed>> cell(nl);
    std::vector<InputTrackChain> xchains;
    std::vector<InputTrackChain> hchains;
    for (std::size_t l = 0; l < nl; ++l) {
      const LayerPlacement& lp = p_.layers[l];
      cell[l].assign(lp.spec.neurons, Fixed{});
      ChainOptions co;
      co.blank_pad = hw_.blank_pad;
      co.edc = cfg_.edc_inputs;
      xchains.emplace_back(lp.x_chain.member_capacity, co);
      xchains.back().set_name("L" + std::to_string(l) + ".x");
      hchains.emplace_back(lp.h_chain.member_capacity, co);
      hchains.back().set_name("L" + std::to_string(l) + ".h");
    }
    for (std::size_t t = 0; t < nt; ++t) {
      for (std::size_t l = 0; l < nl; ++l) {
        const LayerPlacement& lp = p_.layers[l];
        std::uint64_t start = 0;
        if (l > 0) start = std::max(start, res_.end_cycle[l - 1][t]);
        if (t > 0) start = std::max(start, res_.end_cycle[l][t - 1]);
        res_.start_cycle[l][t] = start;
        const std::vector<Fixed>& x = l == 0 ? inputs[t] : res_.outputs[l - 1][t];
        const std::vector<Fixed> zeros(lp.spec.neurons, Fixed{});
        const std::vector<Fixed>& h = t == 0 ? zeros : res_.outputs[l][t - 1];
        const ChainPass xp = run_chain(xchains[l], lp.x_chain, x, start, l, t, 0);
        const ChainPass hp = run_chain(hchains[l], lp.h_chain, h, start, l, t, 1);
        res_.end_cycle[l][t] = compute_layer(l, t, xp, hp, h, cell[l]);
      }
    }
    res_.total_cycles = 0;
    for (const auto& row : res_.end_cycle)
      for (std::uint64_t c : row) res_.total_cycles = std::max(res_.total_cycles, c);
  }

 private:
  ChainPass run_chain(InputTrackChain& chain, const ChainLayout& layout, const std::vector<Fixed>& data,
                      std::uint64_t start, std::size_t l, std::size_t t, std::uint64_t kind) {
    chain.load(data, &res_.ledger);
    const std::size_t m = chain.members();
    std::vector<FaultStream> streams;
    if (chain_faults_) {
      streams.resize(m * InputTrackChain::kPlanes);
      for (std::size_t j = 0; j < m; ++j) {
        if (chain.capacity(j) == 0) continue;
        for (int b = 0; b < InputTrackChain::kPlanes; ++b) {
          if (!region_mask(b, cfg_.region)) continue;
          streams[j * InputTrackChain::kPlanes + static_cast<std::size_t>(b)] =
              make_stream(cfg_, StreamSite::kInputChain, {l, kind, j, static_cast<std::uint64_t>(b), t});
        }
      }
      chain.begin_pass([&streams](std::size_t j, int b, std::uint64_t s) {
        return streams[j * InputTrackChain::kPlanes + static_cast<std::size_t>(b)].fires(s);
      });
    } else {
      chain.begin_pass();
    }
    ChainPass pass;
    const std::size_t len = chain.length();
    pass.words.assign(m, std::vector<Fixed>(len));
    pass.cycle.resize(len);
    pass.start_index.resize(m);
    for (std::size_t j = 0; j < m; ++j) pass.start_index[j] = chain.start_index(j);
    const std::uint64_t stall = layout.stall_per_step();
    const std::uint64_t period = hw_.step_period() + stall;
    std::uint64_t cyc = start + hw_.read_cycles;
    std::vector<Fixed> out(m);
    for (std::size_t s = 0; s < len; ++s) {
      const ChainStepStats st = chain.step(out, &res_.ledger, trace_, cyc);
      res_.faults.chain_overshifts += st.overshifts;
      res_.faults.chain_corrections += st.corrections;
      for (std::size_t j = 0; j < m; ++j) pass.words[j][s] = out[j];
      pass.cycle[s] = cyc;
      if (s + 1 < len) {
        cyc += period;
        res_.stalls.link_stall_cycles += stall;
      }
    }
    const std::uint64_t link_words = layout.links.size() * len;
    res_.stalls.cross_group_words += link_words;
    res_.ledger.interconnect_word(link_words);
    return pass;
  }

  // Streams one PE path through its MAC pipeline. Returns the bias-included sum.
  WideAccumulator run_path(const PathSpec& spec, const ChainPass& pass, std::size_t member, MacPipeline& pipe,
                           std::initializer_list<std::uint64_t> id, const std::string* track_id) {
    WideAccumulator bias_acc;
    const std::size_t len = pass.cycle.size();
    scratch_w_.clear();
    scratch_s_.clear();
    if (spec.hi > spec.lo) {
      const std::size_t st = pass.start_index[member];
      for (std::size_t s = 0; s < len; ++s) {
        std::size_t idx = st + s;
        if (idx >= len) idx -= len;
        if (idx >= spec.lo && idx < spec.hi) {
          scratch_w_.push_back(spec.row[idx]);
          scratch_s_.push_back(s);
        }
      }
    }
    if (spec.bias) scratch_w_.push_back(spec.bias_value);
    if (scratch_w_.empty()) return bias_acc;

    FaultStream wstream;
    FaultStream lstream;
    if (weight_faults_) wstream = make_stream(cfg_, StreamSite::kWeightTrack, id);
    if (logic_faults_) lstream = make_stream(cfg_, StreamSite::kLogicMac, id);
    WeightTrackGroup track(scratch_w_, wopts_);
    track.begin_pass(weight_faults_ ? &wstream : nullptr);
    std::uint64_t last_issue = 0;
    for (std::size_t i = 0; i < scratch_s_.size(); ++i) {
      const WeightRead r = track.next(&res_.ledger);
      note_weight(r, pass.cycle[scratch_s_[i]], track_id);
      std::int64_t term = wide_product(r.value, pass.words[member][scratch_s_[i]]);
      if (logic_faults_ && lstream.fires(i)) {
        term = logic_fault(term);
        ++res_.faults.logic_mac;
      }
      const std::uint64_t at = pass.cycle[scratch_s_[i]];
      const std::uint64_t done = pipe.issue_term(at, term);
      res_.ledger.mac_issue();
      if (!seen_issue_) {
        seen_issue_ = true;
        res_.first_mac_issue = at;
        res_.first_mac_completion = done;
      }
      if (i > 0) {
        const std::uint64_t gap = at - last_issue;
        if (res_.min_issue_gap == 0 || gap < res_.min_issue_gap) res_.min_issue_gap = gap;
      }
      last_issue = at;
    }
    if (spec.bias) {
      const WeightRead r = track.next(&res_.ledger);
      note_weight(r, pass.cycle.back(), track_id);
      bias_acc.add_fixed(r.value);
    }
    track.rewind(&res_.ledger, hw_.weight_rewind_shifts);
    if (trace_ && track_id) {
      trace_->record(pass.cycle.back(), *track_id, TraceOp::kShift,
                     "rewind=" + std::to_string(hw_.weight_rewind_shifts < 0 ? scratch_w_.size()
                                                                              : static_cast<std::size_t>(hw_.weight_rewind_shifts)));
    }
    return bias_acc;
  }

  void note_weight(const WeightRead& r, std::uint64_t cycle, const std::string* track_id) {
    if (r.outcome == WeightOutcome::kSubstitutedZero) ++res_.faults.weight_zeroed;
    if (r.outcome == WeightOutcome::kMisaligned) ++res_.faults.weight_misaligned;
    if (trace_ && track_id) {
      char detail[24];
      std::snprintf(detail, sizeof detail, "0x%04x", static_cast<unsigned>(r.value.bits()));
      trace_->record(cycle, *track_id, r.outcome == WeightOutcome::kSubstitutedZero ? TraceOp::kEdcZero : TraceOp::kRead,
                     detail);
    }
  }

  std::uint64_t compute_layer(std::size_t l, std::size_t t, const ChainPass& xp, const ChainPass& hp,
                              const std::vector<Fixed>& h_prev, std::vector<Fixed>& cell) {
    const LayerPlacement& lp = p_.layers[l];
    const LayerWeights& lw = w_.layers[l];
    const CellType ct = lp.spec.cell;
    const std::size_t k = lp.units_per_neuron;
    const std::size_t lx = lp.spec.inputs;
    const std::size_t lh = lp.spec.neurons;
    const std::size_t r = lp.gate_weights;
    const std::size_t upt = hw_.lstm_units_per_tile;
    const std::size_t gates = gate_count(ct);
    const std::size_t words = partial_words(ct);
    const std::uint64_t pass_end = std::max(xp.cycle.back(), hp.cycle.back());
    const ActivationImpl impl = p_.spec.activation;

    std::vector<Fixed> h_next(lh);
    std::uint64_t layer_end = 0;
    std::vector<std::vector<WideAccumulator>> partial(k, std::vector<WideAccumulator>(words));
    std::vector<std::uint64_t> ready(k);
    std::string track_id;

    for (std::size_t n = 0; n < lh; ++n) {
      for (std::size_t u = 0; u < k; ++u) {
        std::fill(partial[u].begin(), partial[u].end(), WideAccumulator{});
        ready[u] = 0;
        const std::size_t member = (lp.neuron_slot[n] + u) / upt;
        const ChunkRange ch = chunk_range(r, k, u);
        const std::size_t x_lo = std::min(ch.begin, lx);
        const std::size_t x_hi = std::min(ch.end, lx);
        const std::size_t h_lo = std::clamp(ch.begin, lx, lx + lh) - lx;
        const std::size_t h_hi = std::clamp(ch.end, lx, lx + lh) - lx;
        const bool bias = ch.end == r;
        for (std::size_t g = 0; g < gates; ++g) {
          const GateRow row = gate_row(lw.gates[g], n);
          MacPipeline mx(hw_.mac_stages, hw_.mac_cycles_per_stage, hw_.mac_issue_interval);
          MacPipeline mh(hw_.mac_stages, hw_.mac_cycles_per_stage, hw_.mac_issue_interval);
          const std::string* tid = nullptr;
          if (trace_) {
            track_id = "L" + std::to_string(l) + ".n" + std::to_string(n) + ".g" + std::to_string(g) + ".u" +
                       std::to_string(u) + ".x";
            tid = &track_id;
          }
          const WideAccumulator bx = run_path({row.wx, x_lo, x_hi, bias, row.bias}, xp, member, mx,
                                              {l, n, g, u, 0, t}, tid);
          if (trace_) track_id.back() = 'h';
          const WideAccumulator bh = run_path({row.wh, h_lo, h_hi, false, Fixed{}}, hp, member, mh,
                                              {l, n, g, u, 1, t}, tid);
          WideAccumulator xs = mx.accumulator();
          xs.add(bx);
          WideAccumulator hs = mh.accumulator();
          hs.add(bh);
          if (ct == CellType::kGru && g == 2) {
            partial[u][2].add(xs);
            partial[u][3].add(hs);
          } else {
            partial[u][g].add(xs);
            partial[u][g].add(hs);
          }
          ready[u] = std::max({ready[u], mx.drain(pass_end), mh.drain(pass_end)});
        }
      }
      // Reduction toward the leftmost unit.
      const int hops = aggregation_hops(k);
      for (int round = 0; round < hops; ++round) {
        const std::size_t stride = std::size_t{1} << round;
        for (std::size_t u = 0; u < k; ++u) {
          if (aggregation_role(u, round, k) != AggregationRole::kConsume) continue;
          for (std::size_t wi = 0; wi < words; ++wi) partial[u][wi].add(partial[u + stride][wi]);
          ready[u] = std::max(ready[u], ready[u + stride]) + hw_.aggregation_hop_cycles;
          res_.ledger.aggregation_hop(words);
        }
      }

      FaultStream nstream;
      if (logic_faults_) nstream = make_stream(cfg_, StreamSite::kLogicNonlinear, {l, n, t});
      std::uint64_t eval = 0;
      ActivationTap tap;
      if (logic_faults_) {
        tap = [&](Fixed v) {
          if (nstream.fires(eval++)) {
            ++res_.faults.logic_nonlinear;
            return Fixed::from_raw(static_cast<std::int16_t>(logic_fault(v.raw())));
          }
          return v;
        };
      }
      const ActivationTap* tp = logic_faults_ ? &tap : nullptr;
      const auto& s = partial[0];
      switch (ct) {
        case CellType::kLstm: {
          const CellState cs = lstm_output({s[0].narrow(), s[1].narrow(), s[2].narrow(), s[3].narrow()}, cell[n], impl, tp);
          h_next[n] = cs.h;
          cell[n] = cs.c;
          break;
        }
        case CellType::kGru:
          h_next[n] = gru_output({s[0].narrow(), s[1].narrow(), s[2].narrow(), s[3].narrow()}, h_prev[n], impl, tp);
          break;
        case CellType::kVanilla:
          h_next[n] = vanilla_output(s[0].narrow(), impl, tp);
          break;
      }
      res_.ledger.nonlinear_eval(nonlinear_evals(ct));
      const std::uint64_t end = ready[0] + static_cast<std::uint64_t>(activation_stages(ct)) * hw_.activation_latency(impl);
      layer_end = std::max(layer_end, end);
    }
    res_.outputs[l][t] = std::move(h_next);
    return layer_end;
  }

  const Placement& p_;
  const HardwareConfig& hw_;
  const NetworkWeights& w_;
  const ErrorConfig& cfg_;
  TraceSink* trace_;
  RunResult& res_;
  bool chain_faults_ = false;
  bool weight_faults_ = false;
  bool logic_faults_ = false;
  bool seen_issue_ = false;
  WeightTrackOptions wopts_;
  std::vector<Fixed> scratch_w_;
  std::vector<std::size_t> scratch_s_;
};

}  // namespace

RunResult simulate(const Placement& placement, const NetworkWeights& weights, const Sequence& inputs,
                   const ErrorConfig& errors, const SimOptions& opts) {
  check_weights(placement.spec, weights);
  check_inputs(placement.spec, inputs);
  errors.validate();
  RunResult res;
  res.rewind_modeled_as_k_shifts = placement.hw.weight_rewind_shifts < 0;
  Engine engine(placement, weights, errors, opts, res);
  engine.run(inputs);
  res.energy = energy_report(res.ledger, placement.hw.energy);
  return res;
}

std::uint64_t analytic_layer_cycles(const Placement& placement, std::size_t layer) {
  const HardwareConfig& hw = placement.hw;
  const LayerPlacement& lp = placement.layers.at(layer);
  const std::uint64_t steps = std::max(lp.spec.inputs, lp.spec.neurons);
  const std::uint64_t period = hw.step_period() + lp.x_chain.stall_per_step();
  const std::uint64_t act = (lp.spec.cell == CellType::kVanilla ? 1 : 2) *
                            static_cast<std::uint64_t>(hw.activation_latency(placement.spec.activation));
  return hw.read_cycles + (steps - 1) * period + hw.mac_latency() +
         static_cast<std::uint64_t>(lp.aggregation_depth()) * hw.aggregation_hop_cycles + act;
}

std::uint64_t analytic_cycles(const Placement& placement) {
  if (placement.spec.timesteps == 0 || placement.layers.empty()) return 0;
  std::uint64_t sum = 0;
  std::uint64_t worst = 0;
  for (std::size_t l = 0; l < placement.layers.size(); ++l) {
    const std::uint64_t d = analytic_layer_cycles(placement, l);
    sum += d;
    worst = std::max(worst, d);
  }
  return sum + (placement.spec.timesteps - 1) * worst;
}

}  // namespace rnnfast
