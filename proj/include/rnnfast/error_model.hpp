//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rnnfast/fault_stream.hpp"
#include "rnnfast/network.hpp"

namespace rnnfast {

struct Placement;

enum class FaultSite : std::uint8_t { kInputChains = 1, kWeightArrays = 2, kLogic = 4 };
enum class BitRegion { kAll, kIntegerOnly, kFractionOnly, kSignOnly };

std::string_view to_string(BitRegion r);
BitRegion bit_region_from_string(std::string_view s);
std::string_view to_string(FaultSite s);
FaultSite fault_site_from_string(std::string_view s);

bool region_mask(int word_bit_index, BitRegion region);
std::uint16_t region_bits(BitRegion region);

struct ErrorConfig {
  double p_overshift = 4.55e-5;
  std::uint8_t sites = 0;
  BitRegion region = BitRegion::kAll;
  bool edc_inputs = false;
  bool edc_weights = false;
  std::uint64_t seed = 0;

  static ErrorConfig none();
  static std::uint8_t all_sites();
  bool site(FaultSite s) const { return (sites & static_cast<std::uint8_t>(s)) != 0; }
  ErrorConfig& with_site(FaultSite s) {
    sites |= static_cast<std::uint8_t>(s);
    return *this;
  }
  bool active() const { return p_overshift > 0.0 && sites != 0; }
  std::string sites_string() const;
  void validate() const;
};

std::uint8_t sites_from_string(std::string_view s);

enum class StreamSite : std::uint64_t { kInputChain = 1, kWeightTrack = 2, kLogicMac = 3, kLogicNonlinear = 4 };

// Independent per-track stream; identical for any EDC setting.
FaultStream make_stream(const ErrorConfig& cfg, StreamSite site, std::initializer_list<std::uint64_t> ids);

// A one-position slip inside a logic racetrack halves the affected value.
inline std::int64_t logic_fault(std::int64_t v) { return v >> 1; }

struct FidelityMetrics {
  double argmax_agreement = 1.0;
  double nrmse = 0.0;
};

// Last layer, per timestep argmax; nrmse at the final timestep.
FidelityMetrics compare_outputs(const NetworkOutputs& reference, const NetworkOutputs& faulty);

struct FidelityRow {
  ErrorConfig cfg;
  FidelityMetrics metrics;
};

std::vector<FidelityRow> run_fidelity_experiment(const Placement& placement, const NetworkWeights& weights,
                                                 const Sequence& inputs, const std::vector<ErrorConfig>& grid,
                                                 unsigned threads = 1);

std::string fidelity_csv(const std::vector<FidelityRow>& rows);

// p sweep x {EDC on, EDC off}, all sites.
std::vector<double> overshift_sweep();
std::vector<ErrorConfig> edc_sweep_grid(std::uint64_t seed, const std::vector<double>& ps = overshift_sweep());

// One row per (p, edc) cell, averaged over consecutive seeds base_seed, base_seed + 1, ...
struct SweepCell {
  double p = 0.0;
  bool edc = false;
  std::uint8_t sites = 0;
  BitRegion region = BitRegion::kAll;
  std::size_t seeds = 0;
  double argmax_agreement = 0.0;
  double nrmse = 0.0;
};

std::vector<SweepCell> sweep_cells(const Placement& placement, const NetworkWeights& weights, const Sequence& inputs,
                                   const std::vector<double>& ps, const std::vector<bool>& edc, std::uint8_t sites,
                                   BitRegion region, std::uint64_t base_seed, std::size_t seeds, unsigned threads = 1);
std::string sweep_csv(const std::vector<SweepCell>& cells);

struct Fixture {
  NetworkSpec spec;
  NetworkWeights weights;
  Sequence inputs;
};

// 1x128 LSTM, 128 inputs, 32 timesteps, weights U[-0.5, 0.5], inputs U[-1, 1].
Fixture reference_fixture(std::uint64_t seed = 2024);

}  // namespace rnnfast
