//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/racetrack.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

namespace rnnfast {

Racetrack::Racetrack(std::size_t data_len, std::size_t blank_pad, std::vector<Port> ports, Component component)
    : data_len_(data_len), pad_(blank_pad), ports_(std::move(ports)), component_(component),
      cells_(data_len + 2 * blank_pad, 0) {
  if (data_len_ == 0) throw std::invalid_argument("Racetrack: data_len must be positive");
  for (const Port& p : ports_) {
    if (p.position >= data_len_) throw std::invalid_argument("Racetrack: port position outside data domains");
  }
}

void Racetrack::shift(ShiftDirection dir) {
  const std::ptrdiff_t next = offset_ + (dir == ShiftDirection::kLeft ? 1 : -1);
  const auto limit = static_cast<std::ptrdiff_t>(pad_);
  if (next > limit || next < -limit) {
    throw PadOverrun("shift would move offset to " + std::to_string(next) + " beyond blank_pad " +
                     std::to_string(pad_));
  }
  offset_ = next;
  if (ledger_) ledger_->shift(component_);
}

std::size_t Racetrack::cell_under(std::size_t port) const {
  const Port& p = ports_.at(port);
  return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p.position) + offset_ +
                                  static_cast<std::ptrdiff_t>(pad_));
}

bool Racetrack::read(std::size_t port) {
  if (ports_.at(port).kind == PortKind::kWrite) throw std::logic_error("read on a write-only port");
  if (ledger_) ledger_->read(component_);
  return cells_[cell_under(port)] != 0;
}

void Racetrack::shift_write(std::size_t port, bool bit) {
  if (ports_.at(port).kind == PortKind::kRead) throw std::logic_error("write on a read-only port");
  if (ledger_) ledger_->write(component_);
  cells_[cell_under(port)] = bit ? 1 : 0;
}

bool Racetrack::domain(std::ptrdiff_t d) const {
  return cells_.at(static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(pad_))) != 0;
}

void Racetrack::load(std::ptrdiff_t d, bool bit) {
  cells_.at(static_cast<std::size_t>(d + static_cast<std::ptrdiff_t>(pad_))) = bit ? 1 : 0;
}

// ---------------------------------------------------------------------------------------------
// Chain plane layout: [check][E0 E1 E2][head][data ...][pad]. The EDC pattern is 1 0 1, so the
// check port reads E0 after a clean shift and E1 after an overshift. The secondary head is the
// E2 position, one behind the primary head.

namespace {

constexpr std::size_t kCheck = 0;
constexpr std::size_t kHead = 4;
constexpr std::array<std::uint8_t, 3> kEdc = {1, 0, 1};

void shift_plane(std::vector<std::uint8_t>& cells) {
  std::rotate(cells.begin(), cells.begin() + 1, cells.end());
  cells.back() = 0;
}

void write_edc(std::vector<std::uint8_t>& cells) {
  for (std::size_t i = 0; i < kEdc.size(); ++i) cells[1 + i] = kEdc[i];
}

}  // namespace

struct InputTrackChain::Member {
  std::size_t cap = 0;
  std::array<std::vector<std::uint8_t>, kPlanes> planes;
  std::array<bool, kPlanes> suppress{};
  std::array<bool, kPlanes> corrected{};
};

InputTrackChain::InputTrackChain(std::vector<std::size_t> member_capacity, ChainOptions opts)
    : capacity_(std::move(member_capacity)), opts_(opts) {
  if (capacity_.empty()) throw std::invalid_argument("InputTrackChain: no members");
  start_.resize(capacity_.size());
  for (std::size_t j = 0; j < capacity_.size(); ++j) {
    start_[j] = length_;
    length_ += capacity_[j];
  }
  if (length_ == 0) throw std::invalid_argument("InputTrackChain: empty chain");
  const std::size_t pad = std::max<std::size_t>(opts_.blank_pad, 2);
  tracks_.resize(capacity_.size());
  for (std::size_t j = 0; j < capacity_.size(); ++j) {
    Member& m = tracks_[j];
    m.cap = capacity_[j];
    if (m.cap == 0) continue;
    for (auto& p : m.planes) {
      p.assign(kHead + 1 + m.cap + pad, 0);
      write_edc(p);
    }
  }
}

InputTrackChain::~InputTrackChain() = default;
InputTrackChain::InputTrackChain(InputTrackChain&&) noexcept = default;
InputTrackChain& InputTrackChain::operator=(InputTrackChain&&) noexcept = default;

std::vector<std::size_t> InputTrackChain::even_split(std::size_t words, std::size_t members) {
  std::vector<std::size_t> caps(members, 0);
  if (members == 0) return caps;
  for (std::size_t j = 0; j < members; ++j) caps[j] = words / members + (j < words % members ? 1 : 0);
  return caps;
}

std::size_t InputTrackChain::source_of(std::size_t member) const {
  const std::size_t m = capacity_.size();
  std::size_t j = member;
  while (capacity_[j] == 0) j = (j + 1) % m;
  return j;
}

std::size_t InputTrackChain::start_index(std::size_t member) const { return start_[source_of(member)]; }

void InputTrackChain::load(std::span<const Fixed> words, EnergyLedger* ledger) {
  if (words.size() != length_) throw std::invalid_argument("InputTrackChain::load: word count mismatch");
  for (std::size_t j = 0; j < tracks_.size(); ++j) {
    Member& m = tracks_[j];
    if (m.cap == 0) continue;
    for (std::size_t q = 0; q < m.cap; ++q) {
      const std::uint16_t w = words[start_[j] + q].bits();
      for (int b = 0; b < kPlanes; ++b) m.planes[b][kHead + 1 + q] = (w >> b) & 1U;
    }
    for (int b = 0; b < kPlanes; ++b) {
      write_edc(m.planes[b]);
      m.suppress[b] = false;
      m.corrected[b] = false;
    }
  }
  if (ledger) ledger->write(opts_.component, static_cast<std::uint64_t>(length_) * kPlanes);
  step_ = 0;
}

std::vector<Fixed> InputTrackChain::contents() const {
  std::vector<Fixed> out;
  out.reserve(length_);
  for (const Member& m : tracks_) {
    for (std::size_t q = 0; q < m.cap; ++q) {
      std::uint16_t w = 0;
      for (int b = 0; b < kPlanes; ++b) {
        // A pending suppressed shift means the plane sits one position ahead.
        const std::size_t base = m.suppress[b] ? kHead : kHead + 1;
        w |= static_cast<std::uint16_t>(m.planes[b][base + q] << b);
      }
      out.push_back(Fixed::from_bits(w));
    }
  }
  return out;
}

void InputTrackChain::begin_pass(ChainFaultFn faults) {
  faults_ = std::move(faults);
  step_ = 0;
}

ChainStepStats InputTrackChain::step(std::span<Fixed> out, EnergyLedger* ledger, TraceSink* trace,
                                     std::uint64_t cycle) {
  if (out.size() != tracks_.size()) throw std::invalid_argument("InputTrackChain::step: output size mismatch");
  ChainStepStats stats;
  const Component comp = opts_.component;

  for (std::size_t j = 0; j < tracks_.size(); ++j) {
    Member& m = tracks_[j];
    if (m.cap == 0) continue;
    std::uint16_t word = 0;
    std::uint16_t corr_mask = 0;
    std::uint16_t slip_mask = 0;
    int shifts = 0;
    for (int b = 0; b < kPlanes; ++b) {
      auto& cells = m.planes[b];
      bool shifted = false;
      if (m.suppress[b]) {
        m.suppress[b] = false;
      } else {
        const bool over = faults_ && faults_(j, b, step_);
        shift_plane(cells);
        if (over) {
          shift_plane(cells);
          ++stats.overshifts;
          slip_mask |= static_cast<std::uint16_t>(1U << b);
        }
        shifted = true;
        ++shifts;
      }
      bool corrected = false;
      if (opts_.edc && shifted) {
        if (ledger) ledger->edc_read(comp);
        corrected = cells[kCheck] == 0;
      }
      m.corrected[b] = corrected;
      const std::uint8_t bit = corrected ? cells[kHead - 1] : cells[kHead];
      word |= static_cast<std::uint16_t>(bit << b);
      if (corrected) {
        corr_mask |= static_cast<std::uint16_t>(1U << b);
        ++stats.corrections;
      }
    }
    if (ledger) {
      ledger->shift(comp, static_cast<std::uint64_t>(shifts));
      ledger->read(comp, kPlanes);
    }
    out[j] = Fixed::from_bits(word);
    if (trace) {
      const std::string id = name_ + ".m" + std::to_string(j);
      char detail[48];
      std::snprintf(detail, sizeof detail, "planes=%d", shifts);
      trace->record(cycle, id, TraceOp::kShift, detail);
      std::snprintf(detail, sizeof detail, "0x%04x", static_cast<unsigned>(word));
      trace->record(cycle, id, TraceOp::kRead, detail);
      if (corr_mask) {
        std::snprintf(detail, sizeof detail, "planes=0x%04x", static_cast<unsigned>(corr_mask));
        trace->record(cycle, id, TraceOp::kEdcCorrected, detail);
      } else if (slip_mask) {
        std::snprintf(detail, sizeof detail, "uncorrected_planes=0x%04x", static_cast<unsigned>(slip_mask));
        trace->record(cycle, id, TraceOp::kShift, detail);
      }
    }
  }
  for (std::size_t j = 0; j < tracks_.size(); ++j) {
    if (tracks_[j].cap == 0) out[j] = out[source_of(j)];
  }

  const std::size_t n = tracks_.size();
  for (std::size_t j = 0; j < n; ++j) {
    Member& m = tracks_[j];
    if (m.cap == 0) continue;
    const std::uint16_t incoming = out[(j + 1) % n].bits();
    const std::size_t tail = kHead + m.cap;
    for (int b = 0; b < kPlanes; ++b) {
      auto& cells = m.planes[b];
      if (opts_.edc) {
        write_edc(cells);
        if (ledger) ledger->edc_write(comp, kEdc.size());
      }
      cells[m.corrected[b] ? tail - 1 : tail] = (incoming >> b) & 1U;
      if (m.corrected[b]) m.suppress[b] = true;
    }
    if (ledger) ledger->write(comp, kPlanes);
    if (trace) {
      char detail[24];
      std::snprintf(detail, sizeof detail, "0x%04x", static_cast<unsigned>(incoming));
      trace->record(cycle, name_ + ".m" + std::to_string(j), TraceOp::kWrite, detail);
    }
  }
  ++step_;
  return stats;
}

// ---------------------------------------------------------------------------------------------

WeightTrackGroup::WeightTrackGroup(std::span<const Fixed> weights, WeightTrackOptions opts)
    : weights_(weights), opts_(opts) {}

void WeightTrackGroup::begin_pass(FaultStream* faults) {
  faults_ = faults;
  slot_ = 0;
  align_ = 0;
  started_ = false;
  suppress_ = false;
}

WeightRead WeightTrackGroup::next(EnergyLedger* ledger) {
  const Component comp = opts_.component;
  if (!started_) {
    if (weights_.empty()) throw std::out_of_range("WeightTrackGroup::next on an empty track");
    started_ = true;
  } else {
    if (slot_ + 1 >= weights_.size()) throw std::out_of_range("WeightTrackGroup::next past the last weight");
    ++slot_;
    if (suppress_) {
      suppress_ = false;
    } else {
      if (ledger) ledger->shift(comp);
      const bool over = faults_ && faults_->fires(slot_);
      align_ += over ? 2 : 1;
    }
  }
  if (ledger) ledger->read(comp);
  if (opts_.edc) {
    if (ledger) ledger->edc_read(comp);
    if ((align_ & 1U) != (slot_ & 1U)) {
      suppress_ = true;
      ++zeroed_;
      return {Fixed{}, WeightOutcome::kSubstitutedZero};
    }
  }
  const Fixed truth = weights_[slot_];
  if (align_ == slot_) return {truth, WeightOutcome::kOk};
  const std::uint16_t seen = align_ < weights_.size() ? weights_[align_].bits() : 0;
  const std::uint16_t mask = opts_.fault_bits;
  ++misaligned_;
  const auto mixed = static_cast<std::uint16_t>((truth.bits() & ~mask) | (seen & mask));
  return {Fixed::from_bits(mixed), WeightOutcome::kMisaligned};
}

void WeightTrackGroup::rewind(EnergyLedger* ledger, long shifts) {
  const std::uint64_t n = shifts < 0 ? weights_.size() : static_cast<std::uint64_t>(shifts);
  if (ledger) ledger->shift(opts_.component, n);
  started_ = false;
  slot_ = 0;
  align_ = 0;
  suppress_ = false;
}

}  // namespace rnnfast
