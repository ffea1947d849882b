//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "rnnfast/energy.hpp"
#include "rnnfast/error_model.hpp"
#include "rnnfast/mapping.hpp"
#include "rnnfast/network.hpp"
#include "rnnfast/trace.hpp"

namespace rnnfast {

struct StallStats {
  std::uint64_t link_stall_cycles = 0;
  std::uint64_t cross_group_words = 0;
};

struct FaultStats {
  std::uint64_t chain_overshifts = 0;
  std::uint64_t chain_corrections = 0;
  std::uint64_t weight_zeroed = 0;
  std::uint64_t weight_misaligned = 0;
  std::uint64_t logic_mac = 0;
  std::uint64_t logic_nonlinear = 0;
};

struct RunResult {
  NetworkOutputs outputs;
  std::uint64_t total_cycles = 0;
  EnergyLedger ledger;
  EnergyReport energy;
  // [layer][timestep]
  std::vector<std::vector<std::uint64_t>> start_cycle;
  std::vector<std::vector<std::uint64_t>> end_cycle;
  StallStats stalls;
  FaultStats faults;
  std::uint64_t first_mac_issue = 0;
  std::uint64_t first_mac_completion = 0;
  std::uint64_t min_issue_gap = 0;
  bool rewind_modeled_as_k_shifts = true;

  double seconds(const HardwareConfig& hw) const { return static_cast<double>(total_cycles) * hw.clock_period_ns * 1e-9; }
};

struct SimOptions {
  TraceSink* trace = nullptr;
};

RunResult simulate(const Placement& placement, const NetworkWeights& weights, const Sequence& inputs,
                   const ErrorConfig& errors = ErrorConfig::none(), const SimOptions& opts = {});

// Per-timestep duration of one layer in isolation.
std::uint64_t analytic_layer_cycles(const Placement& placement, std::size_t layer);
std::uint64_t analytic_cycles(const Placement& placement);

}  // namespace rnnfast
