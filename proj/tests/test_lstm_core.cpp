//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <algorithm>
#include <random>

#include "rnnfast/lstm_core.hpp"
#include "rnnfast/reference_oracle.hpp"

using namespace rnnfast;

namespace {

Fixed fx(double v) { return Fixed::from_real(v); }

std::array<GateRow, 4> rows4(const LayerWeights& w, std::size_t n) {
  return {gate_row(w.gates[0], n), gate_row(w.gates[1], n), gate_row(w.gates[2], n), gate_row(w.gates[3], n)};
}

}  // namespace

TEST_CASE("zero-weight LSTM closed form") {
  const LayerWeights w = zero_layer({CellType::kLstm, 1, 3});
  const std::vector<Fixed> x = {fx(0.3), fx(-0.7), fx(1.0)};
  const std::vector<Fixed> h = {fx(0.2)};
  for (double cp : {0.0, 0.5, -1.25, 3.0}) {
    const Fixed c_prev = fx(cp);
    const CellState s = lstm_cell_step(x, h, c_prev, rows4(w, 0));
    const Fixed c = add(mul(Fixed::half(), c_prev), mul(Fixed::half(), Fixed{}));
    CHECK(s.c == c);
    CHECK(s.h == mul(Fixed::half(), tanh_approx(c)));
  }
}

TEST_CASE("bias of -1 drives sigmoid gates to 0.25") {
  LayerWeights w = zero_layer({CellType::kLstm, 1, 2});
  for (auto& g : w.gates) g.bias[0] = fx(-1.0);
  const std::vector<Fixed> x(2);
  const std::vector<Fixed> h(1);
  LstmPreact z;
  z.i = gate_accumulate(x, h, gate_row(w.gates[0], 0)).narrow();
  CHECK(sigmoid_approx(z.i) == fx(0.25));
  const CellState s = lstm_cell_step(x, h, Fixed{}, rows4(w, 0));
  // i=0.25, g=tanh(-1), c=0.25*g
  const Fixed g = tanh_approx(fx(-1.0));
  CHECK(s.c == add(mul(fx(0.25), Fixed{}), mul(fx(0.25), g)));
}

TEST_CASE("zero-weight GRU and Vanilla closed forms") {
  const LayerWeights g = zero_layer({CellType::kGru, 1, 2});
  const std::vector<Fixed> x = {fx(1.0), fx(-1.0)};
  const std::vector<Fixed> h = {fx(0.75)};
  const std::array<GateRow, 3> r = {gate_row(g.gates[0], 0), gate_row(g.gates[1], 0), gate_row(g.gates[2], 0)};
  CHECK(gru_cell_step(x, h, h[0], r) == mul(Fixed::half(), h[0]));
  const LayerWeights v = zero_layer({CellType::kVanilla, 1, 2});
  CHECK(vanilla_cell_step(x, h, gate_row(v.gates[0], 0)) == Fixed{});
}

TEST_CASE("dimension mismatch is reported") {
  const LayerWeights w = zero_layer({CellType::kLstm, 2, 3});
  const std::vector<Fixed> x(2);
  const std::vector<Fixed> h(2);
  CHECK_THROWS_AS(lstm_cell_step(x, h, Fixed{}, rows4(w, 0)), DimensionMismatch);
  const LayerWeights v = zero_layer({CellType::kVanilla, 2, 3});
  CHECK_THROWS_AS(vanilla_cell_step(std::vector<Fixed>(3), std::vector<Fixed>(1), gate_row(v.gates[0], 0)), DimensionMismatch);
}

TEST_CASE("random 8x8 cells against the float oracle") {
  for (CellType ct : {CellType::kLstm, CellType::kGru, CellType::kVanilla}) {
    NetworkSpec spec;
    spec.layers = {{ct, 8, 8}};
    spec.timesteps = 1;
    const NetworkWeights w = random_weights(spec, 42, 1.0);
    const Sequence x = random_inputs(1, 8, 43, 1.0);
    const NetworkOutputs q = evaluate_network(spec, w, x);
    const FloatOutputs f = float_network(spec, w, x);
    for (std::size_t j = 0; j < 8; ++j) CHECK(std::abs(q[0][0][j].to_real() - f[0][0][j]) <= 0.05);
  }
}

TEST_CASE("MAC pipeline timing") {
  MacPipeline p;
  CHECK(p.latency() == 96);
  CHECK(mac_issue(p, 0, fx(1.0), fx(1.0)) == 96);
  CHECK(mac_issue(p, 2, fx(1.0), fx(1.0)) == 98);
  CHECK(mac_issue(p, 4, fx(1.0), fx(1.0)) == 100);
  MacPipeline q;
  q.issue(0, fx(1.0), fx(1.0));
  CHECK_THROWS_AS(q.issue(1, fx(1.0), fx(1.0)), IssueTooSoon);
}

TEST_CASE("MAC value independent of schedule") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> d(-32768, 32767);
  std::uniform_int_distribution<int> gap(2, 9);
  std::vector<std::pair<Fixed, Fixed>> terms(200);
  WideAccumulator ref;
  for (auto& [a, b] : terms) {
    a = Fixed::from_raw(static_cast<std::int16_t>(d(gen)));
    b = Fixed::from_raw(static_cast<std::int16_t>(d(gen)));
    ref = mac_accumulate(ref, a, b);
  }
  for (int trial = 0; trial < 5; ++trial) {
    MacPipeline p;
    std::uint64_t c = static_cast<std::uint64_t>(gap(gen));
    for (auto& [a, b] : terms) {
      p.issue(c, a, b);
      c += static_cast<std::uint64_t>(gap(gen));
    }
    CHECK(p.accumulator() == ref);
  }
}

TEST_CASE("Booth multiplier basics and exhaustive 8-bit operands") {
  for (int r = -32768; r <= 32767; ++r) {
    const Fixed x = Fixed::from_raw(static_cast<std::int16_t>(r));
    REQUIRE(booth_multiply(x, Fixed{}) == Fixed{});
    REQUIRE(booth_multiply(x, Fixed::one()) == x);
  }
  for (int a = -128; a <= 127; ++a) {
    for (int b = -128; b <= 127; ++b) {
      const Fixed fa = Fixed::from_raw(static_cast<std::int16_t>(a));
      const Fixed fb = Fixed::from_raw(static_cast<std::int16_t>(b));
      REQUIRE(booth_multiply(fa, fb) == mul(fa, fb));
    }
  }
  const BoothRecoding shared = booth_recode(fx(-3.25));
  for (double a : {0.5, -7.0, 100.0}) {
    CHECK(booth_product(fx(a), shared) == wide_product(fx(a), fx(-3.25)));
  }
}

TEST_CASE("aggregation trees") {
  const std::vector<Fixed> one = {fx(2.5)};
  CHECK(aggregate(std::span<const Fixed>(one)).value == fx(2.5));
  CHECK(aggregate(std::span<const Fixed>(one)).hops == 0);
  std::vector<Fixed> four = {fx(1), fx(2), fx(3), fx(4)};
  const FixedAggregation a = aggregate(std::span<const Fixed>(four));
  CHECK(a.value == fx(10.0));
  CHECK(a.hops == 2);
  std::sort(four.begin(), four.end(), [](Fixed x, Fixed y) { return x.raw() > y.raw(); });
  CHECK(aggregate(std::span<const Fixed>(four)).value == fx(10.0));
  CHECK(aggregation_hops(3) == 2);
  CHECK(aggregation_hops(5) == 3);
  CHECK(aggregation_role(0, 0, 4) == AggregationRole::kConsume);
  CHECK(aggregation_role(1, 0, 4) == AggregationRole::kForward);
  CHECK(aggregation_role(2, 0, 4) == AggregationRole::kConsume);
  CHECK(aggregation_role(2, 1, 4) == AggregationRole::kForward);
  CHECK(aggregation_role(0, 1, 4) == AggregationRole::kConsume);
  CHECK(aggregation_role(2, 0, 3) == AggregationRole::kIdle);
  std::vector<WideAccumulator> w(7);
  for (std::size_t i = 0; i < w.size(); ++i) w[i].add_raw(static_cast<std::int64_t>(i) * 1000 - 3001);
  const AggregationResult r = aggregate(std::span<const WideAccumulator>(w));
  CHECK(r.sum.raw() == 21000 - 7 * 3001);
  CHECK(r.transfers == 6);
  CHECK(r.hops == 3);
}

TEST_CASE("chunks cover the concatenated vector") {
  for (std::size_t r : {1u, 5u, 4001u, 2049u}) {
    for (std::size_t k = 1; k <= std::min<std::size_t>(r, 7); ++k) {
      std::size_t next = 0;
      for (std::size_t u = 0; u < k; ++u) {
        const ChunkRange c = chunk_range(r, k, u);
        CHECK(c.begin == next);
        CHECK(c.end > c.begin);
        next = c.end;
      }
      CHECK(next == r);
    }
  }
}
