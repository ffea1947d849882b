//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <random>
#include <set>

#include "rnnfast/lstm_core.hpp"
#include "rnnfast/mapping.hpp"
#include "rnnfast/racetrack.hpp"
#include "rnnfast/simulator.hpp"

using namespace rnnfast;

namespace {

NetworkSpec stack(CellType c, std::size_t inputs, std::vector<std::size_t> widths, std::size_t t = 1) {
  NetworkSpec s;
  std::size_t in = inputs;
  for (std::size_t n : widths) {
    s.layers.push_back({c, n, in});
    in = n;
  }
  s.timesteps = t;
  return s;
}

// Supply-versus-demand check written without reference to the mapper.
bool feasible(const NetworkSpec& s, const HardwareConfig& hw) {
  if (s.layers.size() > hw.rows_per_group) return false;
  const std::size_t row_units = hw.tiles_per_row * hw.lstm_units_per_tile;
  for (const auto& l : s.layers) {
    const std::size_t demand = l.inputs + l.neurons + 1;
    const std::size_t k = (demand + hw.weights_per_pe - 1) / hw.weights_per_pe;
    if (k > row_units) return false;
    const std::size_t per_row = (l.cell == CellType::kVanilla && k == 1) ? 4 * row_units : row_units / k;
    if (l.neurons > hw.groups * per_row) return false;
    const std::size_t words = std::max(l.inputs, l.neurons);
    if ((words + hw.input_track_words - 1) / hw.input_track_words > hw.groups * hw.tiles_per_row) return false;
  }
  return true;
}

void check_invariants(const Placement& p) {
  const HardwareConfig& hw = p.hw;
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerPlacement& lp = p.layers[l];
    REQUIRE(lp.units_per_neuron * hw.weights_per_pe >= lp.gate_weights);
    std::size_t words = 0;
    for (std::size_t c : lp.x_chain.member_capacity) {
      REQUIRE(c <= hw.input_track_words);
      words += c;
    }
    REQUIRE(words == lp.spec.inputs);
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> seen;
    for (const TileRef& t : lp.tiles) {
      REQUIRE(t.row == l);
      REQUIRE(t.group < hw.groups);
      REQUIRE(t.col < hw.tiles_per_row);
      REQUIRE(seen.insert({t.group, t.row, t.col}).second);
    }
    const std::size_t capacity_slots = lp.tiles.size() * hw.lstm_units_per_tile;
    for (std::size_t n = 0; n < lp.spec.neurons; ++n) REQUIRE(lp.neuron_slot[n] + lp.units_per_neuron <= capacity_slots);
  }
}

}  // namespace

TEST_CASE("single layer 512x512 maps one neuron per unit") {
  const Placement p = map_network(stack(CellType::kLstm, 512, {512}), HardwareConfig{});
  REQUIRE(p.layers.size() == 1);
  CHECK(p.layers[0].units == 512);
  CHECK(p.layers[0].tiles.size() == 8);
  CHECK(p.layers[0].units_per_neuron == 1);
  CHECK(p.layers[0].aggregation_depth() == 0);
  CHECK(p.layers[0].x_chain.links.empty());
  check_invariants(p);
}

TEST_CASE("4000 weights per gate spans three units") {
  LayerSpec l{CellType::kLstm, 1000, 2999};
  CHECK(l.inputs + l.neurons + 1 == 4000);
  CHECK(units_per_neuron(l, HardwareConfig{}) == 3);
  NetworkSpec s;
  s.layers = {l};
  s.timesteps = 1;
  const Placement p = map_network(s, HardwareConfig{});
  CHECK(p.layers[0].aggregation_depth() == 2);
  CHECK(p.layers[0].units == 3000);
  check_invariants(p);
}

TEST_CASE("Vanilla packs four neurons per unit") {
  const Placement p = map_network(stack(CellType::kVanilla, 64, {256}), HardwareConfig{});
  CHECK(p.layers[0].units == 64);
  CHECK(p.layers[0].neuron_pe[5] == 1);
  CHECK(p.layers[0].neuron_slot[5] == 1);
  const UtilizationReport r = utilization_report(p);
  CHECK(r.layers[0].vanilla_neurons_per_unit == 4);
}

TEST_CASE("seq2seq 3x1024 resource counts") {
  const Placement p = map_network(stack(CellType::kLstm, 1024, {1024, 1024, 1024}, 15), HardwareConfig{});
  const UtilizationReport r = utilization_report(p);
  CHECK(r.units_used == 6144);
  CHECK(r.pes_used == 24576);
  check_invariants(p);
}

TEST_CASE("GRU MAC activity is three quarters of LSTM") {
  const HardwareConfig hw;
  const UtilizationReport g = utilization_report(map_network(stack(CellType::kGru, 200, {300}), hw));
  const UtilizationReport l = utilization_report(map_network(stack(CellType::kLstm, 200, {300}), hw));
  CHECK(g.layers[0].pe_macs_active * 4 == l.layers[0].pe_macs_active * 3);
  CHECK(g.layers[0].pe_macs_inactive * 4 == g.layers[0].pe_macs_active + g.layers[0].pe_macs_inactive);
  CHECK(g.layers[0].mac_issues_per_timestep * 4 == l.layers[0].mac_issues_per_timestep * 3);
}

TEST_CASE("empty network reports zero utilization") {
  Placement p;
  p.hw = HardwareConfig{};
  const UtilizationReport r = utilization_report(p);
  CHECK(r.units_used == 0);
  CHECK(r.unit_fraction == 0.0);
  CHECK(r.mac_fraction == 0.0);
}

TEST_CASE("chain plans") {
  const Placement one = map_network(stack(CellType::kLstm, 64, {64}), HardwareConfig{});
  CHECK(one.layers[0].x_chain.member_capacity == std::vector<std::size_t>{64});
  CHECK(one.layers[0].x_chain.links.empty());

  const Placement two = map_network(stack(CellType::kLstm, 128, {128}), HardwareConfig{});
  const ChainLayout& c = two.layers[0].x_chain;
  REQUIRE(c.member_capacity.size() == 2);
  InputTrackChain chain(c.member_capacity);
  std::vector<Fixed> words(128);
  for (std::size_t i = 0; i < 128; ++i) words[i] = Fixed::from_raw(static_cast<std::int16_t>(i + 1));
  chain.load(words);
  chain.begin_pass();
  std::vector<std::multiset<int>> seen(2);
  std::vector<Fixed> out(2);
  for (std::size_t s = 0; s < chain.length(); ++s) {
    chain.step(out);
    for (std::size_t j = 0; j < 2; ++j) seen[j].insert(out[j].raw());
  }
  for (const auto& m : seen) {
    CHECK(m.size() == 128);
    CHECK(std::set<int>(m.begin(), m.end()).size() == 128);
  }
}

TEST_CASE("cross-group look-ahead hides interconnect latency") {
  HardwareConfig hw;
  hw.tiles_per_row = 1;
  hw.groups = 4;
  const NetworkSpec s = stack(CellType::kLstm, 128, {128}, 2);
  const Placement p = map_network(s, hw);
  REQUIRE(p.layers[0].group_tiles.size() == 2);
  REQUIRE(!p.layers[0].x_chain.links.empty());
  CHECK(p.layers[0].x_chain.links[0].lookahead_cycles == 4);
  CHECK(p.layers[0].x_chain.links[0].latency_cycles == 4);
  const NetworkWeights w = random_weights(s, 3, 0.5);
  const Sequence x = random_inputs(2, 128, 4, 1.0);
  const RunResult r = simulate(p, w, x);
  CHECK(r.stalls.link_stall_cycles == 0);
  CHECK(r.stalls.cross_group_words > 0);

  hw.lookahead_cycles = 0;
  const Placement q = map_network(s, hw);
  const RunResult rq = simulate(q, w, x);
  CHECK(rq.stalls.link_stall_cycles > 0);
  CHECK(rq.total_cycles > r.total_cycles);
  CHECK(rq.outputs == r.outputs);
}

TEST_CASE("capacity shortfalls are structured") {
  HardwareConfig hw;
  hw.rows_per_group = 2;
  try {
    map_network(stack(CellType::kLstm, 8, {8, 8, 8}), hw);
    FAIL("expected CapacityExceeded");
  } catch (const CapacityExceeded& e) {
    CHECK(e.shortfall().resource == "rows");
    CHECK(e.shortfall().required == 3);
    CHECK(e.shortfall().available == 2);
  }
  hw = HardwareConfig{};
  hw.groups = 1;
  hw.tiles_per_row = 2;
  try {
    map_network(stack(CellType::kLstm, 8, {200}), hw);
    FAIL("expected CapacityExceeded");
  } catch (const CapacityExceeded& e) {
    CHECK(e.shortfall().resource == "groups");
    CHECK(e.shortfall().layer == 0);
  }
}

TEST_CASE("mapping fuzz against a feasibility oracle") {
  std::mt19937_64 gen(77);
  std::uniform_int_distribution<int> cell(0, 2);
  std::uniform_int_distribution<std::size_t> layers(1, 5);
  std::uniform_int_distribution<std::size_t> width(1, 1200);
  std::uniform_int_distribution<std::size_t> small(1, 6);
  std::uniform_int_distribution<std::size_t> cap(16, 2048);
  int feasible_count = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    HardwareConfig hw;
    hw.tiles_per_row = small(gen);
    hw.rows_per_group = small(gen);
    hw.groups = small(gen);
    hw.weights_per_pe = cap(gen);
    NetworkSpec s;
    s.timesteps = 1;
    std::size_t in = width(gen);
    const std::size_t nl = layers(gen);
    for (std::size_t l = 0; l < nl; ++l) {
      const std::size_t n = width(gen);
      s.layers.push_back({static_cast<CellType>(cell(gen)), n, in});
      in = n;
    }
    const bool expect = feasible(s, hw);
    bool got = true;
    try {
      const Placement p = map_network(s, hw);
      check_invariants(p);
    } catch (const CapacityExceeded&) {
      got = false;
    }
    REQUIRE(got == expect);
    feasible_count += expect ? 1 : 0;
  }
  CHECK(feasible_count > 100);
  CHECK(feasible_count < 1900);
}

TEST_CASE("outputs do not depend on placement") {
  NetworkSpec s = stack(CellType::kLstm, 150, {90, 70}, 3);
  s.layers[1].cell = CellType::kGru;
  const NetworkWeights w = random_weights(s, 10, 1.0);
  const Sequence x = random_inputs(3, 150, 11, 1.0);
  const NetworkOutputs ref = evaluate_network(s, w, x);
  HardwareConfig a;
  HardwareConfig b;
  b.tiles_per_row = 1;
  b.weights_per_pe = 100;
  HardwareConfig c;
  c.weights_per_pe = 64;
  c.tiles_per_row = 3;
  for (const HardwareConfig& hw : {a, b, c}) {
    const Placement p = map_network(s, hw);
    CHECK(simulate(p, w, x).outputs == ref);
  }
}
