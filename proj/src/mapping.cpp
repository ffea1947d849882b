//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/mapping.hpp"

#include <algorithm>

#include "rnnfast/lstm_core.hpp"

namespace rnnfast {

namespace {

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

std::vector<std::size_t> even_split(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> out(parts);
  for (std::size_t i = 0; i < parts; ++i) out[i] = total / parts + (i < total % parts ? 1 : 0);
  return out;
}

void require_positive(std::size_t v, const char* name) {
  if (v == 0) throw ValidationError(std::string("hardware.") + name, "must be positive");
}

std::size_t units_for(const LayerSpec& l, std::size_t neurons, std::size_t k) {
  if (l.cell == CellType::kVanilla && k == 1) return ceil_div(neurons, 4);
  return neurons * k;
}

}  // namespace

void HardwareConfig::validate() const {
  require_positive(lstm_units_per_tile, "lstm_units_per_tile");
  require_positive(weights_per_pe, "weights_per_pe");
  require_positive(input_track_words, "input_track_words");
  require_positive(tiles_per_row, "tiles_per_row");
  require_positive(rows_per_group, "rows_per_group");
  require_positive(groups, "groups");
  require_positive(read_cycles, "read_cycles");
  require_positive(shift_cycles, "shift_cycles");
  require_positive(write_cycles, "write_cycles");
  require_positive(mac_stages, "mac_stages");
  require_positive(mac_cycles_per_stage, "mac_cycles_per_stage");
  require_positive(mac_issue_interval, "mac_issue_interval");
  if (pes_per_unit != 4) throw ValidationError("hardware.pes_per_unit", "only 4 PEs per unit are modeled");
  if (!(clock_period_ns > 0.0)) throw ValidationError("hardware.clock_period_ns", "must be positive");
}

std::uint32_t HardwareConfig::step_period() const {
  return std::max({mac_issue_interval, read_cycles, shift_cycles + write_cycles});
}

std::uint32_t HardwareConfig::lookahead() const {
  return lookahead_cycles < 0 ? interconnect_latency_cycles : static_cast<std::uint32_t>(lookahead_cycles);
}

std::uint32_t HardwareConfig::link_stall_per_step() const {
  const std::uint32_t la = lookahead();
  return interconnect_latency_cycles > la ? interconnect_latency_cycles - la : 0;
}

std::uint32_t HardwareConfig::activation_latency(ActivationImpl impl) const {
  return impl == ActivationImpl::kLut ? activation_latency_lut : activation_latency_approx;
}

CapacityExceeded::CapacityExceeded(Shortfall s)
    : std::runtime_error("capacity exceeded: layer " + std::to_string(s.layer) + " needs " +
                         std::to_string(s.required) + " " + s.resource + ", " + std::to_string(s.available) +
                         " available"),
      shortfall_(std::move(s)) {}

std::uint32_t ChainLayout::stall_per_step() const {
  std::uint32_t s = 0;
  for (const auto& l : links) {
    if (l.latency_cycles > l.lookahead_cycles) s = std::max(s, l.latency_cycles - l.lookahead_cycles);
  }
  return s;
}

int LayerPlacement::aggregation_depth() const { return aggregation_hops(units_per_neuron); }

std::size_t units_per_neuron(const LayerSpec& l, const HardwareConfig& hw) {
  return ceil_div(l.inputs + l.neurons + 1, hw.weights_per_pe);
}

ChainLayout chain_plan(const LayerPlacement& layer, const HardwareConfig& hw, ChainKind kind) {
  ChainLayout c;
  c.kind = kind;
  c.words = kind == ChainKind::kInput ? layer.spec.inputs : layer.spec.neurons;
  const std::size_t m = layer.tiles.size();
  c.member_capacity = even_split(c.words, m);
  for (std::size_t j = 0; j < m && m > 1; ++j) {
    const std::size_t to = (j + m - 1) % m;
    if (layer.tiles[j].group != layer.tiles[to].group) {
      c.links.push_back({j, to, layer.tiles[j].group, layer.tiles[to].group, hw.interconnect_latency_cycles,
                         hw.lookahead()});
    }
  }
  return c;
}

Placement map_network(const NetworkSpec& spec, const HardwareConfig& hw) {
  spec.validate();
  hw.validate();
  Placement p;
  p.spec = spec;
  p.hw = hw;
  if (spec.layers.size() > hw.rows_per_group) {
    throw CapacityExceeded({spec.layers.size() - 1, "rows", spec.layers.size(), hw.rows_per_group});
  }
  const std::size_t upt = hw.lstm_units_per_tile;
  for (std::size_t l = 0; l < spec.layers.size(); ++l) {
    const LayerSpec& ls = spec.layers[l];
    LayerPlacement lp;
    lp.spec = ls;
    lp.gate_weights = ls.inputs + ls.neurons + 1;
    lp.units_per_neuron = units_per_neuron(ls, hw);
    const std::size_t k = lp.units_per_neuron;
    if (k > hw.units_per_row()) throw CapacityExceeded({l, "units_per_row", k, hw.units_per_row()});
    const std::size_t chain_tiles =
        std::max(ceil_div(ls.inputs, hw.input_track_words), ceil_div(ls.neurons, hw.input_track_words));

    std::vector<std::size_t> share;
    std::vector<std::size_t> seg_tiles;
    bool placed = false;
    for (std::size_t g = 1; g <= hw.groups && !placed; ++g) {
      share = even_split(ls.neurons, g);
      const auto chain_share = even_split(chain_tiles, g);
      seg_tiles.assign(g, 0);
      bool ok = true;
      for (std::size_t q = 0; q < g && ok; ++q) {
        const std::size_t t = std::max(ceil_div(units_for(ls, share[q], k), upt), chain_share[q]);
        if (t == 0 || t > hw.tiles_per_row) ok = false;
        seg_tiles[q] = t;
      }
      placed = ok;
    }
    if (!placed) {
      const std::size_t per_group = ls.cell == CellType::kVanilla && k == 1 ? hw.units_per_row() * 4
                                                                              : hw.units_per_row() / k;
      const std::size_t need = std::max(ceil_div(ls.neurons, per_group), ceil_div(chain_tiles, hw.tiles_per_row));
      throw CapacityExceeded({l, "groups", need, hw.groups});
    }

    lp.group_tiles = seg_tiles;
    lp.neuron_slot.resize(ls.neurons);
    lp.neuron_pe.assign(ls.neurons, 0);
    std::size_t neuron = 0;
    std::size_t tile_base = 0;
    for (std::size_t q = 0; q < seg_tiles.size(); ++q) {
      for (std::size_t c = 0; c < seg_tiles[q]; ++c) {
        lp.tiles.push_back({static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(c)});
      }
      const std::size_t base = tile_base * upt;
      for (std::size_t i = 0; i < share[q]; ++i, ++neuron) {
        if (ls.cell == CellType::kVanilla && k == 1) {
          lp.neuron_slot[neuron] = static_cast<std::uint32_t>(base + i / 4);
          lp.neuron_pe[neuron] = static_cast<std::uint8_t>(i % 4);
        } else {
          lp.neuron_slot[neuron] = static_cast<std::uint32_t>(base + i * k);
        }
      }
      lp.units += units_for(ls, share[q], k);
      tile_base += seg_tiles[q];
    }
    lp.x_chain = chain_plan(lp, hw, ChainKind::kInput);
    lp.h_chain = chain_plan(lp, hw, ChainKind::kHidden);
    p.layers.push_back(std::move(lp));
  }
  return p;
}

UtilizationReport utilization_report(const Placement& p) {
  UtilizationReport r;
  const HardwareConfig& hw = p.hw;
  r.tiles_available = hw.groups * hw.tiles_per_group();
  r.units_available = r.tiles_available * hw.lstm_units_per_tile;
  r.pes_available = r.units_available * hw.pes_per_unit;
  r.macs_available = r.pes_available * 2;
  for (const auto& lp : p.layers) {
    LayerUtilization u;
    u.cell = lp.spec.cell;
    u.neurons = lp.spec.neurons;
    u.units = lp.units;
    u.tiles = lp.tiles.size();
    u.units_per_neuron = lp.units_per_neuron;
    u.groups_spanned = lp.group_tiles.size();
    u.cross_group_links = lp.x_chain.links.size();
    const std::uint64_t dot = lp.spec.inputs + lp.spec.neurons;
    switch (lp.spec.cell) {
      case CellType::kLstm:
        u.pes_used = lp.units * 4;
        u.pe_macs_active = lp.units * 8;
        u.mac_issues_per_timestep = 4 * lp.spec.neurons * dot;
        break;
      case CellType::kGru:
        u.pes_used = lp.units * 4;
        u.pe_macs_active = lp.units * 6;
        u.pe_macs_inactive = lp.units * 2;
        u.mac_issues_per_timestep = 3 * lp.spec.neurons * dot;
        break;
      case CellType::kVanilla:
        u.pes_used = lp.spec.neurons * lp.units_per_neuron;
        u.pe_macs_active = u.pes_used * 2;
        u.vanilla_neurons_per_unit = lp.units_per_neuron == 1 ? 4 : 1;
        u.mac_issues_per_timestep = lp.spec.neurons * dot;
        break;
    }
    r.units_used += u.units;
    r.pes_used += u.pes_used;
    r.macs_active += u.pe_macs_active;
    r.tiles_used += u.tiles;
    r.layers.push_back(u);
  }
  r.unit_fraction = r.units_available ? static_cast<double>(r.units_used) / r.units_available : 0.0;
  r.mac_fraction = r.macs_available ? static_cast<double>(r.macs_active) / r.macs_available : 0.0;
  return r;
}

}  // namespace rnnfast
