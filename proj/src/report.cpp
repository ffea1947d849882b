//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/report.hpp"

namespace rnnfast {

ordered_json to_json(const NetworkSpec& spec) {
  ordered_json j;
  j["layers"] = ordered_json::array();
  for (const auto& l : spec.layers) {
    j["layers"].push_back({{"cell", to_string(l.cell)}, {"neurons", l.neurons}, {"inputs", l.inputs}});
  }
  j["timesteps"] = spec.timesteps;
  j["activation"] = to_string(spec.activation);
  return j;
}

ordered_json to_json(const HardwareConfig& hw) {
  return {{"lstm_units_per_tile", hw.lstm_units_per_tile},
          {"pes_per_unit", hw.pes_per_unit},
          {"weights_per_pe", hw.weights_per_pe},
          {"input_track_words", hw.input_track_words},
          {"tiles_per_row", hw.tiles_per_row},
          {"rows_per_group", hw.rows_per_group},
          {"groups", hw.groups},
          {"blank_pad", hw.blank_pad},
          {"interconnect_latency_cycles", hw.interconnect_latency_cycles},
          {"lookahead_cycles", hw.lookahead()},
          {"clock_period_ns", hw.clock_period_ns},
          {"read_cycles", hw.read_cycles},
          {"shift_cycles", hw.shift_cycles},
          {"write_cycles", hw.write_cycles},
          {"step_period_cycles", hw.step_period()},
          {"mac_stages", hw.mac_stages},
          {"mac_cycles_per_stage", hw.mac_cycles_per_stage},
          {"mac_latency_cycles", hw.mac_latency()},
          {"mac_issue_interval", hw.mac_issue_interval},
          {"activation_latency_approx", hw.activation_latency_approx},
          {"activation_latency_lut", hw.activation_latency_lut},
          {"aggregation_hop_cycles", hw.aggregation_hop_cycles},
          {"weight_rewind_shifts", hw.weight_rewind_shifts},
          {"energy_pj",
           {{"read", aj_to_pj(hw.energy.read_aj)},
            {"shift", aj_to_pj(hw.energy.shift_aj)},
            {"write", aj_to_pj(hw.energy.write_aj)},
            {"mac", aj_to_pj(hw.energy.mac_aj)},
            {"nonlinear", aj_to_pj(hw.energy.nonlinear_aj)},
            {"hop", aj_to_pj(hw.energy.hop_aj)},
            {"interconnect", aj_to_pj(hw.energy.interconnect_aj)}}}};
}

namespace {

ordered_json chain_json(const ChainLayout& c) {
  ordered_json links = ordered_json::array();
  for (const auto& l : c.links) {
    links.push_back({{"from_member", l.from_member},
                     {"to_member", l.to_member},
                     {"from_group", l.from_group},
                     {"to_group", l.to_group},
                     {"latency_cycles", l.latency_cycles},
                     {"lookahead_cycles", l.lookahead_cycles}});
  }
  return {{"words", c.words}, {"member_capacity", c.member_capacity}, {"links", links},
          {"stall_per_step", c.stall_per_step()}};
}

}  // namespace

ordered_json to_json(const Placement& p) {
  ordered_json layers = ordered_json::array();
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerPlacement& lp = p.layers[l];
    ordered_json tiles = ordered_json::array();
    for (const auto& t : lp.tiles) tiles.push_back({t.group, t.row, t.col});
    layers.push_back({{"layer", l},
                      {"cell", to_string(lp.spec.cell)},
                      {"neurons", lp.spec.neurons},
                      {"inputs", lp.spec.inputs},
                      {"gate_weights", lp.gate_weights},
                      {"units_per_neuron", lp.units_per_neuron},
                      {"units", lp.units},
                      {"aggregation_depth", lp.aggregation_depth()},
                      {"group_tiles", lp.group_tiles},
                      {"tiles", tiles},
                      {"neuron_slot", lp.neuron_slot},
                      {"neuron_pe", lp.neuron_pe},
                      {"x_chain", chain_json(lp.x_chain)},
                      {"h_chain", chain_json(lp.h_chain)}});
  }
  return {{"layers", layers}};
}

ordered_json to_json(const UtilizationReport& u) {
  ordered_json layers = ordered_json::array();
  for (const auto& l : u.layers) {
    layers.push_back({{"cell", to_string(l.cell)},
                      {"neurons", l.neurons},
                      {"units", l.units},
                      {"tiles", l.tiles},
                      {"units_per_neuron", l.units_per_neuron},
                      {"pes_used", l.pes_used},
                      {"pe_macs_active", l.pe_macs_active},
                      {"pe_macs_inactive", l.pe_macs_inactive},
                      {"vanilla_neurons_per_unit", l.vanilla_neurons_per_unit},
                      {"mac_issues_per_timestep", l.mac_issues_per_timestep},
                      {"groups_spanned", l.groups_spanned},
                      {"cross_group_links", l.cross_group_links}});
  }
  return {{"layers", layers},
          {"units_used", u.units_used},
          {"units_available", u.units_available},
          {"pes_used", u.pes_used},
          {"pes_available", u.pes_available},
          {"macs_active", u.macs_active},
          {"macs_available", u.macs_available},
          {"tiles_used", u.tiles_used},
          {"tiles_available", u.tiles_available},
          {"unit_fraction", u.unit_fraction},
          {"mac_fraction", u.mac_fraction}};
}

ordered_json to_json(const ErrorConfig& c) {
  return {{"p_overshift", c.p_overshift},
          {"sites", c.sites_string()},
          {"region", to_string(c.region)},
          {"edc_inputs", c.edc_inputs},
          {"edc_weights", c.edc_weights},
          {"seed", c.seed}};
}

ordered_json timing_json(const Placement& p) {
  ordered_json per_layer = ordered_json::array();
  for (std::size_t l = 0; l < p.layers.size(); ++l) per_layer.push_back(analytic_layer_cycles(p, l));
  const std::uint64_t total = analytic_cycles(p);
  return {{"analytic_cycles", total},
          {"seconds", static_cast<double>(total) * p.hw.clock_period_ns * 1e-9},
          {"layer_timestep_cycles", per_layer}};
}

ordered_json run_json(const Placement& p, const RunResult& r, const ErrorConfig& errors) {
  ordered_json j;
  j["total_cycles"] = r.total_cycles;
  j["seconds"] = r.seconds(p.hw);
  if (!errors.active()) j["analytic_cycles"] = analytic_cycles(p);
  j["first_mac_issue"] = r.first_mac_issue;
  j["first_mac_completion"] = r.first_mac_completion;
  j["min_issue_gap"] = r.min_issue_gap;
  j["rewind_modeled_as_k_shifts"] = r.rewind_modeled_as_k_shifts;
  j["start_cycle"] = r.start_cycle;
  j["end_cycle"] = r.end_cycle;
  j["stalls"] = {{"link_stall_cycles", r.stalls.link_stall_cycles}, {"cross_group_words", r.stalls.cross_group_words}};
  j["error"] = to_json(errors);
  j["faults"] = {{"chain_overshifts", r.faults.chain_overshifts},
                 {"chain_corrections", r.faults.chain_corrections},
                 {"weight_zeroed", r.faults.weight_zeroed},
                 {"weight_misaligned", r.faults.weight_misaligned},
                 {"logic_mac", r.faults.logic_mac},
                 {"logic_nonlinear", r.faults.logic_nonlinear}};
  j["energy"] = ordered_json::parse(r.energy.to_json());
  ordered_json raw = ordered_json::array();
  for (const auto& layer : r.outputs) {
    ordered_json steps = ordered_json::array();
    for (const auto& h : layer) {
      ordered_json v = ordered_json::array();
      for (Fixed x : h) v.push_back(x.raw());
      steps.push_back(v);
    }
    raw.push_back(steps);
  }
  j["outputs_q8_8"] = raw;
  ordered_json last = ordered_json::array();
  if (!r.outputs.empty()) {
    for (const auto& h : r.outputs.back()) last.push_back(to_real(h));
  }
  j["last_layer_outputs"] = last;
  return j;
}

ordered_json float_outputs_json(const FloatOutputs& out) {
  ordered_json j = ordered_json::array();
  for (const auto& layer : out) j.push_back(layer);
  return j;
}

}  // namespace rnnfast
