//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnnfast/energy.hpp"
#include "rnnfast/network.hpp"
#include "rnnfast/nonlinear.hpp"

namespace rnnfast {

struct HardwareConfig {
  std::size_t lstm_units_per_tile = 64;
  std::size_t pes_per_unit = 4;
  std::size_t weights_per_pe = 1640;
  std::size_t input_track_words = 64;
  std::size_t tiles_per_row = 16;
  std::size_t rows_per_group = 8;
  std::size_t groups = 16;
  std::size_t blank_pad = 4;

  std::uint32_t interconnect_latency_cycles = 4;
  // Negative: planned equal to the interconnect latency.
  std::int64_t lookahead_cycles = -1;

  double clock_period_ns = 0.5;
  std::uint32_t read_cycles = 2;
  std::uint32_t shift_cycles = 1;
  std::uint32_t write_cycles = 1;
  std::uint32_t mac_stages = 48;
  std::uint32_t mac_cycles_per_stage = 2;
  std::uint32_t mac_issue_interval = 2;
  std::uint32_t activation_latency_approx = 16;
  std::uint32_t activation_latency_lut = 8;
  std::uint32_t aggregation_hop_cycles = 2;
  // Negative: K single shifts for a K-weight track.
  std::int64_t weight_rewind_shifts = -1;

  EnergyTable energy;

  void validate() const;
  std::size_t tiles_per_group() const { return tiles_per_row * rows_per_group; }
  std::size_t units_per_row() const { return tiles_per_row * lstm_units_per_tile; }
  std::uint32_t step_period() const;
  std::uint32_t mac_latency() const { return mac_stages * mac_cycles_per_stage; }
  std::uint32_t lookahead() const;
  std::uint32_t link_stall_per_step() const;
  std::uint32_t activation_latency(ActivationImpl impl) const;
};

struct Shortfall {
  std::size_t layer = 0;
  std::string resource;
  std::size_t required = 0;
  std::size_t available = 0;
};

class CapacityExceeded : public std::runtime_error {
 public:
  explicit CapacityExceeded(Shortfall s);
  const Shortfall& shortfall() const { return shortfall_; }

 private:
  Shortfall shortfall_;
};

struct TileRef {
  std::uint32_t group = 0;
  std::uint32_t row = 0;
  std::uint32_t col = 0;
  friend bool operator==(const TileRef&, const TileRef&) = default;
};

struct ChainLink {
  std::size_t from_member = 0;  // forwards to to_member
  std::size_t to_member = 0;
  std::uint32_t from_group = 0;
  std::uint32_t to_group = 0;
  std::uint32_t latency_cycles = 0;
  std::uint32_t lookahead_cycles = 0;
};

enum class ChainKind { kInput, kHidden };

struct ChainLayout {
  ChainKind kind = ChainKind::kInput;
  std::size_t words = 0;
  // Member j is the layer's tile j.
  std::vector<std::size_t> member_capacity;
  std::vector<ChainLink> links;

  std::uint32_t stall_per_step() const;
};

struct LayerPlacement {
  LayerSpec spec;
  std::size_t units_per_neuron = 1;  // k
  std::size_t units = 0;
  std::size_t gate_weights = 0;  // inputs + neurons + 1
  std::vector<TileRef> tiles;
  std::vector<std::size_t> group_tiles;  // tiles per group segment, in order
  // Layer-local unit slot (tile_index * units_per_tile + unit) of each neuron's leftmost unit.
  std::vector<std::uint32_t> neuron_slot;
  // Vanilla packing: PE index inside the unit; 0 otherwise.
  std::vector<std::uint8_t> neuron_pe;
  ChainLayout x_chain;
  ChainLayout h_chain;

  int aggregation_depth() const;
  std::size_t tile_of_slot(std::size_t slot, std::size_t units_per_tile) const { return slot / units_per_tile; }
};

struct Placement {
  NetworkSpec spec;
  HardwareConfig hw;
  std::vector<LayerPlacement> layers;
};

std::size_t units_per_neuron(const LayerSpec& l, const HardwareConfig& hw);
Placement map_network(const NetworkSpec& spec, const HardwareConfig& hw);
ChainLayout chain_plan(const LayerPlacement& layer, const HardwareConfig& hw, ChainKind kind);

struct LayerUtilization {
  CellType cell = CellType::kLstm;
  std::size_t neurons = 0;
  std::size_t units = 0;
  std::size_t tiles = 0;
  std::size_t units_per_neuron = 1;
  std::size_t pes_used = 0;
  std::size_t pe_macs_active = 0;
  std::size_t pe_macs_inactive = 0;
  std::size_t vanilla_neurons_per_unit = 0;
  std::uint64_t mac_issues_per_timestep = 0;
  std::size_t groups_spanned = 0;
  std::size_t cross_group_links = 0;
};

struct UtilizationReport {
  std::vector<LayerUtilization> layers;
  std::size_t units_used = 0;
  std::size_t units_available = 0;
  std::size_t pes_used = 0;
  std::size_t pes_available = 0;
  std::size_t macs_active = 0;
  std::size_t macs_available = 0;
  std::size_t tiles_used = 0;
  std::size_t tiles_available = 0;
  double unit_fraction = 0.0;
  double mac_fraction = 0.0;
};

UtilizationReport utilization_report(const Placement& p);

}  // namespace rnnfast
