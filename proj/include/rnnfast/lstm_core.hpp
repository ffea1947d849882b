//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "rnnfast/fixed_point.hpp"
#include "rnnfast/network.hpp"
#include "rnnfast/nonlinear.hpp"

namespace rnnfast {

// One neuron's slice of a gate.
struct GateRow {
  std::span<const Fixed> wx;
  std::span<const Fixed> wh;
  Fixed bias;
};

GateRow gate_row(const GateWeights& g, std::size_t neuron);

// W_x.x + W_h.h + b, exact.
WideAccumulator gate_accumulate(std::span<const Fixed> x, std::span<const Fixed> h, const GateRow& row);

// Optional hook applied to every activation output (fault injection).
using ActivationTap = std::function<Fixed(Fixed)>;

struct CellState {
  Fixed h;
  Fixed c;
};

struct LstmPreact {
  Fixed i, f, o, c;
};

struct GruPreact {
  Fixed z, r, n_x, n_h;
};

CellState lstm_output(const LstmPreact& z, Fixed c_prev, ActivationImpl impl, const ActivationTap* tap = nullptr);
Fixed gru_output(const GruPreact& z, Fixed h_self, ActivationImpl impl, const ActivationTap* tap = nullptr);
Fixed vanilla_output(Fixed z, ActivationImpl impl, const ActivationTap* tap = nullptr);

// Gates ordered i f o c.
CellState lstm_cell_step(std::span<const Fixed> x, std::span<const Fixed> h_prev, Fixed c_prev,
                         const std::array<GateRow, 4>& w, ActivationImpl impl = ActivationImpl::kApprox);
// Gates ordered z r n; h_self is this neuron's previous output.
Fixed gru_cell_step(std::span<const Fixed> x, std::span<const Fixed> h_prev, Fixed h_self,
                    const std::array<GateRow, 3>& w, ActivationImpl impl = ActivationImpl::kApprox);
Fixed vanilla_cell_step(std::span<const Fixed> x, std::span<const Fixed> h_prev, const GateRow& w,
                        ActivationImpl impl = ActivationImpl::kApprox);

struct LayerState {
  std::vector<Fixed> h;
  std::vector<Fixed> c;
};

LayerState layer_step(const LayerWeights& w, std::span<const Fixed> x, const LayerState& prev, ActivationImpl impl);
NetworkOutputs evaluate_network(const NetworkSpec& spec, const NetworkWeights& w, const Sequence& inputs);

class IssueTooSoon : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class MacPipeline {
 public:
  static constexpr std::uint32_t kStages = 48;
  static constexpr std::uint32_t kCyclesPerStage = 2;
  static constexpr std::uint32_t kIssueInterval = 2;

  explicit MacPipeline(std::uint32_t stages = kStages, std::uint32_t cycles_per_stage = kCyclesPerStage,
                       std::uint32_t issue_interval = kIssueInterval);

  std::uint32_t latency() const { return stages_ * cycles_per_stage_; }
  std::uint32_t issue_interval() const { return interval_; }

  std::uint64_t issue(std::uint64_t cycle, Fixed a, Fixed b);
  // Same timing, caller-supplied Q16.16 term.
  std::uint64_t issue_term(std::uint64_t cycle, std::int64_t term);
  // Cycle at which everything issued up to `cycle` has left the pipeline.
  std::uint64_t drain(std::uint64_t cycle) const;

  const WideAccumulator& accumulator() const { return acc_; }
  std::uint64_t issues() const { return issues_; }
  std::uint64_t last_completion() const { return last_completion_; }
  void reset();

 private:
  std::uint32_t stages_;
  std::uint32_t cycles_per_stage_;
  std::uint32_t interval_;
  WideAccumulator acc_;
  std::uint64_t issues_ = 0;
  std::uint64_t last_issue_ = 0;
  std::uint64_t last_completion_ = 0;
};

std::uint64_t mac_issue(MacPipeline& pipe, std::uint64_t cycle, Fixed a, Fixed b);

// Radix-4 digits of a 16-bit multiplier, least significant first; each in [-2, 2].
struct BoothRecoding {
  std::array<std::int8_t, 8> digits{};
};

BoothRecoding booth_recode(Fixed multiplier);
std::int64_t booth_product(Fixed multiplicand, const BoothRecoding& rec);
Fixed booth_multiply(Fixed a, Fixed b);

enum class AggregationRole { kConsume, kForward, kIdle };

int aggregation_hops(std::size_t k);
// Role of unit `unit` (0 = leftmost) in round `round` of a k-unit tree.
AggregationRole aggregation_role(std::size_t unit, int round, std::size_t k);

struct AggregationResult {
  WideAccumulator sum;
  int hops = 0;
  std::size_t transfers = 0;
};

AggregationResult aggregate(std::span<const WideAccumulator> partials);

struct FixedAggregation {
  Fixed value;
  int hops = 0;
};

FixedAggregation aggregate(std::span<const Fixed> partials);

// Contiguous chunk u of k over the concatenated [x | h | bias] vector of length r.
struct ChunkRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

ChunkRange chunk_range(std::size_t r, std::size_t k, std::size_t u);

}  // namespace rnnfast
