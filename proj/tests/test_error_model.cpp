//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <cmath>

#include "rnnfast/error_model.hpp"
#include "rnnfast/mapping.hpp"
#include "rnnfast/simulator.hpp"

using namespace rnnfast;

namespace {

struct Small {
  NetworkSpec spec;
  Placement p;
  NetworkWeights w;
  Sequence x;
};

Small small_net() {
  Small s;
  s.spec.layers = {{CellType::kLstm, 24, 40}};
  s.spec.timesteps = 6;
  s.p = map_network(s.spec, HardwareConfig{});
  s.w = random_weights(s.spec, 31, 0.5);
  s.x = random_inputs(6, 40, 32, 1.0);
  return s;
}

}  // namespace

TEST_CASE("empirical fault rate within three sigma") {
  for (double p : {4.55e-5, 1e-3}) {
    FaultStream f(p, stream_key(123, {7}));
    const std::uint64_t n = 10'000'000;
    std::uint64_t hits = 0;
    for (std::uint64_t e = 0; e < n; ++e) hits += f.fires(e) ? 1 : 0;
    const double mean = p * static_cast<double>(n);
    const double sigma = std::sqrt(mean * (1.0 - p));
    CHECK(std::abs(static_cast<double>(hits) - mean) <= 3.0 * sigma);
  }
}

TEST_CASE("degenerate probabilities") {
  FaultStream never(0.0, 1);
  FaultStream always(1.0, 1);
  for (std::uint64_t e = 0; e < 1000; ++e) {
    CHECK_FALSE(never.fires(e));
    CHECK(always.fires(e));
  }
}

TEST_CASE("region masks") {
  CHECK(region_bits(BitRegion::kAll) == 0xFFFF);
  CHECK(region_bits(BitRegion::kIntegerOnly) == 0xFF00);
  CHECK(region_bits(BitRegion::kFractionOnly) == 0x00FF);
  CHECK(region_bits(BitRegion::kSignOnly) == 0x8000);
  CHECK(region_mask(15, BitRegion::kSignOnly));
  CHECK_FALSE(region_mask(14, BitRegion::kSignOnly));
  CHECK_THROWS_AS(region_mask(16, BitRegion::kAll), std::out_of_range);
  CHECK(bit_region_from_string("fraction_only") == BitRegion::kFractionOnly);
  CHECK(sites_from_string("inputs+logic") ==
        (static_cast<std::uint8_t>(FaultSite::kInputChains) | static_cast<std::uint8_t>(FaultSite::kLogic)));
  CHECK_THROWS(sites_from_string("bogus"));
}

TEST_CASE("configuration validation") {
  ErrorConfig c;
  c.p_overshift = 1.5;
  c.sites = ErrorConfig::all_sites();
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c.p_overshift = 1e-3;
  c.sites = 0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("error-free runs agree fully") {
  const Small s = small_net();
  const RunResult r = simulate(s.p, s.w, s.x);
  const FidelityMetrics m = compare_outputs(r.outputs, r.outputs);
  CHECK(m.argmax_agreement == 1.0);
  CHECK(m.nrmse == 0.0);
  ErrorConfig zero;
  zero.p_overshift = 0.0;
  zero.sites = ErrorConfig::all_sites();
  const auto rows = run_fidelity_experiment(s.p, s.w, s.x, {zero});
  CHECK(rows[0].metrics.argmax_agreement == 1.0);
}

TEST_CASE("argmax ties resolve to the lowest index") {
  NetworkOutputs a = {{{Fixed::one(), Fixed::one(), Fixed{}}}};
  NetworkOutputs b = {{{Fixed{}, Fixed::one(), Fixed::one()}}};
  CHECK(compare_outputs(a, b).argmax_agreement == 0.0);
  NetworkOutputs c = {{{Fixed::one(), Fixed::half(), Fixed::one()}}};
  CHECK(compare_outputs(a, c).argmax_agreement == 1.0);
}

TEST_CASE("input-chain EDC restores exact outputs") {
  const Small s = small_net();
  const RunResult clean = simulate(s.p, s.w, s.x);
  for (double p : {1e-4, 1e-3, 1e-2}) {
    ErrorConfig c;
    c.p_overshift = p;
    c.sites = static_cast<std::uint8_t>(FaultSite::kInputChains);
    c.edc_inputs = true;
    c.seed = 5;
    const RunResult r = simulate(s.p, s.w, s.x, c);
    CHECK(r.outputs == clean.outputs);
    if (p >= 1e-3) {
      CHECK(r.faults.chain_overshifts > 0);
      CHECK(r.faults.chain_corrections == r.faults.chain_overshifts);
    }
  }
}

TEST_CASE("EDC on and off see the same fault trace") {
  const Small s = small_net();
  ErrorConfig c;
  c.p_overshift = 2e-3;
  c.sites = ErrorConfig::all_sites();
  c.seed = 77;
  const RunResult off = simulate(s.p, s.w, s.x, c);
  c.edc_inputs = true;
  c.edc_weights = true;
  const RunResult on = simulate(s.p, s.w, s.x, c);
  CHECK(off.faults.chain_overshifts == on.faults.chain_overshifts);
  CHECK(off.faults.logic_mac == on.faults.logic_mac);
  CHECK(off.faults.chain_overshifts > 0);
  CHECK(on.faults.weight_zeroed > 0);
  CHECK(off.faults.weight_zeroed == 0);
}

TEST_CASE("logic faults halve values") {
  CHECK(logic_fault(100) == 50);
  CHECK(logic_fault(-3) == -2);
}

TEST_CASE("fidelity experiment is independent of thread count") {
  const Small s = small_net();
  const auto grid = edc_sweep_grid(3, {1e-4, 1e-3, 1e-2});
  const auto one = run_fidelity_experiment(s.p, s.w, s.x, grid, 1);
  const auto four = run_fidelity_experiment(s.p, s.w, s.x, grid, 4);
  REQUIRE(one.size() == 6);
  CHECK(fidelity_csv(one) == fidelity_csv(four));
  CHECK(fidelity_csv(one).rfind("p,sites,region,edc_inputs,edc_weights,seed,argmax_agreement,nrmse\n", 0) == 0);
}

TEST_CASE("reference fixture shape") {
  const Fixture f = reference_fixture();
  CHECK(f.spec.timesteps == 32);
  CHECK(f.inputs.size() == 32);
  CHECK(f.inputs[0].size() == 128);
  CHECK(f.weights.layers[0].gates.size() == 4);
  CHECK(reference_fixture().inputs == f.inputs);
}

TEST_CASE("agreement does not rise with p without EDC") {
  const Small s = small_net();
  const std::vector<double> ps = overshift_sweep();
  std::vector<std::vector<double>> agree(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    std::vector<ErrorConfig> grid;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      ErrorConfig c;
      c.p_overshift = ps[i];
      c.sites = ErrorConfig::all_sites();
      c.seed = seed;
      grid.push_back(c);
    }
    for (const auto& row : run_fidelity_experiment(s.p, s.w, s.x, grid)) agree[i].push_back(row.metrics.argmax_agreement);
  }
  // A rise from one p to the next must not be significant (one-sided paired t, 29 dof, 95%).
  const double t_crit = 1.699;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    double mean = 0.0;
    for (std::size_t k = 0; k < 30; ++k) mean += (agree[i + 1][k] - agree[i][k]) / 30.0;
    double var = 0.0;
    for (std::size_t k = 0; k < 30; ++k) {
      const double d = agree[i + 1][k] - agree[i][k] - mean;
      var += d * d / 29.0;
    }
    if (var == 0.0) {
      CHECK(mean <= 0.0);
    } else {
      CHECK(mean / std::sqrt(var / 30.0) <= t_crit);
    }
  }
  double lo = 0.0;
  double hi = 0.0;
  for (std::size_t k = 0; k < 30; ++k) {
    lo += agree.front()[k] / 30.0;
    hi += agree.back()[k] / 30.0;
  }
  CHECK(hi < lo);
}

TEST_CASE("low fault rate leaves outputs virtually unaffected") {
  const Fixture f = reference_fixture();
  const Placement p = map_network(f.spec, HardwareConfig{});
  for (bool edc : {false, true}) {
    std::vector<ErrorConfig> grid;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      ErrorConfig c;
      c.p_overshift = 4.55e-7;
      c.sites = ErrorConfig::all_sites();
      c.edc_inputs = edc;
      c.edc_weights = edc;
      c.seed = seed;
      grid.push_back(c);
    }
    double mean = 0.0;
    for (const auto& row : run_fidelity_experiment(p, f.weights, f.inputs, grid)) mean += row.metrics.argmax_agreement / 30.0;
    INFO("edc=" << edc << " agreement=" << mean);
    CHECK(mean >= 0.999);
  }
}
