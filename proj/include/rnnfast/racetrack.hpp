//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rnnfast/energy.hpp"
#include "rnnfast/fault_stream.hpp"
#include "rnnfast/fixed_point.hpp"
#include "rnnfast/trace.hpp"

namespace rnnfast {

class PadOverrun : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum class PortKind { kRead, kWrite, kReadWrite };
enum class ShiftDirection { kLeft, kRight };

struct Port {
  PortKind kind = PortKind::kReadWrite;
  std::size_t position = 0;
};

// A tape of domains moving past fixed ports. Domain d sits under port p when d == p + offset.
class Racetrack {
 public:
  explicit Racetrack(std::size_t data_len = 64, std::size_t blank_pad = 4,
                     std::vector<Port> ports = {Port{}}, Component component = Component::kOther);

  void attach(EnergyLedger* ledger) { ledger_ = ledger; }

  void shift(ShiftDirection dir);
  bool read(std::size_t port);
  void shift_write(std::size_t port, bool bit);

  // Direct access by logical domain index in [-blank_pad, data_len + blank_pad); no ledger traffic.
  bool domain(std::ptrdiff_t d) const;
  void load(std::ptrdiff_t d, bool bit);

  std::ptrdiff_t offset() const { return offset_; }
  std::size_t data_len() const { return data_len_; }
  std::size_t blank_pad() const { return pad_; }
  const std::vector<Port>& ports() const { return ports_; }

 private:
  std::size_t cell_under(std::size_t port) const;

  std::size_t data_len_;
  std::size_t pad_;
  std::vector<Port> ports_;
  Component component_;
  std::vector<std::uint8_t> cells_;
  std::ptrdiff_t offset_ = 0;
  EnergyLedger* ledger_ = nullptr;
};

struct ChainOptions {
  std::size_t blank_pad = 4;
  bool edc = false;
  Component component = Component::kInputChain;
};

struct ChainStepStats {
  std::uint32_t corrections = 0;
  std::uint32_t overshifts = 0;
};

// Asked once per actual shift of a bit-plane track: (member, plane, step) -> overshift?
using ChainFaultFn = std::function<bool(std::size_t, int, std::uint64_t)>;

// Circular buffer of 16-bit words striped over 16 single-bit tracks per member.
// Each step every member reads the word at its head and forwards it to the left neighbour's tail.
class InputTrackChain {
 public:
  static constexpr int kPlanes = 16;

  InputTrackChain(std::vector<std::size_t> member_capacity, ChainOptions opts = {});
  ~InputTrackChain();
  InputTrackChain(InputTrackChain&&) noexcept;
  InputTrackChain& operator=(InputTrackChain&&) noexcept;

  // Even split of `words` over `members`.
  static std::vector<std::size_t> even_split(std::size_t words, std::size_t members);

  std::size_t length() const { return length_; }
  std::size_t members() const { return capacity_.size(); }
  std::size_t capacity(std::size_t member) const { return capacity_[member]; }
  // Index of the first word a member reads in a pass.
  std::size_t start_index(std::size_t member) const;
  bool edc_enabled() const { return opts_.edc; }

  void set_name(std::string name) { name_ = std::move(name); }

  // Word i goes to the member whose range holds i. Counts one write per plane per word.
  void load(std::span<const Fixed> words, EnergyLedger* ledger = nullptr);
  // Ring contents starting at each member's next word, member 0 first.
  std::vector<Fixed> contents() const;

  void begin_pass(ChainFaultFn faults = {});
  ChainStepStats step(std::span<Fixed> out, EnergyLedger* ledger = nullptr, TraceSink* trace = nullptr,
                      std::uint64_t cycle = 0);
  std::uint64_t steps_in_pass() const { return step_; }

 private:
  struct Member;
  std::size_t source_of(std::size_t member) const;

  std::vector<std::size_t> capacity_;
  std::vector<std::size_t> start_;
  std::size_t length_ = 0;
  ChainOptions opts_;
  std::vector<Member> tracks_;
  ChainFaultFn faults_;
  std::uint64_t step_ = 0;
  std::string name_ = "chain";
};

struct WeightTrackOptions {
  bool edc = false;
  // Bits that come from the misaligned neighbour on an uncorrected slip.
  std::uint16_t fault_bits = 0xFFFF;
  Component component = Component::kWeightArray;
};

enum class WeightOutcome { kOk, kMisaligned, kSubstitutedZero };

struct WeightRead {
  Fixed value;
  WeightOutcome outcome = WeightOutcome::kOk;
};

// Word-level weight track: alignment i exposes W_i. The EDC stripe alternates by index.
class WeightTrackGroup {
 public:
  explicit WeightTrackGroup(std::span<const Fixed> weights, WeightTrackOptions opts = {});

  std::size_t size() const { return weights_.size(); }

  void begin_pass(FaultStream* faults = nullptr);
  WeightRead next(EnergyLedger* ledger = nullptr);
  // Returns to W0; cost in single shifts (K when negative).
  void rewind(EnergyLedger* ledger = nullptr, long shifts = -1);

  std::size_t slot() const { return slot_; }
  std::size_t alignment() const { return align_; }
  std::uint64_t zero_substitutions() const { return zeroed_; }
  std::uint64_t misaligned_reads() const { return misaligned_; }

 private:
  std::span<const Fixed> weights_;
  WeightTrackOptions opts_;
  FaultStream* faults_ = nullptr;
  std::size_t slot_ = 0;
  std::size_t align_ = 0;
  bool started_ = false;
  bool suppress_ = false;
  std::uint64_t zeroed_ = 0;
  std::uint64_t misaligned_ = 0;
};

}  // namespace rnnfast
