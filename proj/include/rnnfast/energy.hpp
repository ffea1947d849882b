//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string>

namespace rnnfast {

// Per-op energies in attojoules so sums stay exact.
struct EnergyTable {
  std::int64_t read_aj = 390'000;
  std::int64_t shift_aj = 240'000;
  std::int64_t write_aj = 9'600;
  std::int64_t mac_aj = 0;
  std::int64_t nonlinear_aj = 0;
  std::int64_t hop_aj = 0;
  std::int64_t interconnect_aj = 0;
};

std::int64_t pj_to_aj(double pj);
double aj_to_pj(std::int64_t aj);

enum class Component { kInputChain = 0, kWeightArray = 1, kOther = 2 };
inline constexpr int kComponentCount = 3;

struct TrackCounters {
  std::uint64_t read = 0;
  std::uint64_t write = 0;
  std::uint64_t shift = 0;
  std::uint64_t edc_read = 0;
  std::uint64_t edc_write = 0;

  TrackCounters& operator+=(const TrackCounters& o);
  friend bool operator==(const TrackCounters&, const TrackCounters&) = default;
};

class EnergyLedger {
 public:
  void read(Component c, std::uint64_t n = 1) { tracks_[idx(c)].read += n; }
  void write(Component c, std::uint64_t n = 1) { tracks_[idx(c)].write += n; }
  void shift(Component c, std::uint64_t n = 1) { tracks_[idx(c)].shift += n; }
  void edc_read(Component c, std::uint64_t n = 1) { tracks_[idx(c)].edc_read += n; }
  void edc_write(Component c, std::uint64_t n = 1) { tracks_[idx(c)].edc_write += n; }
  void mac_issue(std::uint64_t n = 1) { mac_issue_ += n; }
  void nonlinear_eval(std::uint64_t n = 1) { nonlinear_eval_ += n; }
  void aggregation_hop(std::uint64_t n = 1) { aggregation_hop_ += n; }
  void interconnect_word(std::uint64_t n = 1) { interconnect_word_ += n; }

  const TrackCounters& component(Component c) const { return tracks_[idx(c)]; }
  TrackCounters tracks_total() const;
  std::uint64_t track_read() const { return tracks_total().read; }
  std::uint64_t track_write() const { return tracks_total().write; }
  std::uint64_t track_shift() const { return tracks_total().shift; }
  std::uint64_t mac_issue() const { return mac_issue_; }
  std::uint64_t nonlinear_eval() const { return nonlinear_eval_; }
  std::uint64_t aggregation_hop() const { return aggregation_hop_; }
  std::uint64_t interconnect_word() const { return interconnect_word_; }

  EnergyLedger& operator+=(const EnergyLedger& o);
  friend bool operator==(const EnergyLedger&, const EnergyLedger&) = default;

 private:
  static constexpr int idx(Component c) { return static_cast<int>(c); }
  TrackCounters tracks_[kComponentCount];
  std::uint64_t mac_issue_ = 0;
  std::uint64_t nonlinear_eval_ = 0;
  std::uint64_t aggregation_hop_ = 0;
  std::uint64_t interconnect_word_ = 0;
};

struct EnergyBreakdown {
  std::int64_t input_chains_aj = 0;
  std::int64_t weight_arrays_aj = 0;
  std::int64_t other_tracks_aj = 0;
  std::int64_t edc_aj = 0;
  std::int64_t mac_aj = 0;
  std::int64_t nonlinear_aj = 0;
  std::int64_t aggregation_aj = 0;
  std::int64_t interconnect_aj = 0;

  std::int64_t compute_aj() const;
  std::int64_t total_aj() const { return compute_aj() + edc_aj; }
};

EnergyBreakdown energy_breakdown(const EnergyLedger& ledger, const EnergyTable& table);

struct EnergyReport {
  EnergyLedger ledger;
  EnergyBreakdown breakdown;
  double total_pj = 0.0;
  std::string to_json() const;
  std::string to_csv() const;
};

EnergyReport energy_report(const EnergyLedger& ledger, const EnergyTable& table = {});

}  // namespace rnnfast
