//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/energy.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace rnnfast {

std::int64_t pj_to_aj(double pj) { return std::llround(pj * 1e6); }
double aj_to_pj(std::int64_t aj) { return static_cast<double>(aj) / 1e6; }

TrackCounters& TrackCounters::operator+=(const TrackCounters& o) {
  read += o.read;
  write += o.write;
  shift += o.shift;
  edc_read += o.edc_read;
  edc_write += o.edc_write;
  return *this;
}

TrackCounters EnergyLedger::tracks_total() const {
  TrackCounters t;
  for (const auto& c : tracks_) t += c;
  return t;
}

EnergyLedger& EnergyLedger::operator+=(const EnergyLedger& o) {
  for (int i = 0; i < kComponentCount; ++i) tracks_[i] += o.tracks_[i];
  mac_issue_ += o.mac_issue_;
  nonlinear_eval_ += o.nonlinear_eval_;
  aggregation_hop_ += o.aggregation_hop_;
  interconnect_word_ += o.interconnect_word_;
  return *this;
}

namespace {

std::int64_t track_aj(const TrackCounters& c, const EnergyTable& t) {
  return static_cast<std::int64_t>(c.read) * t.read_aj + static_cast<std::int64_t>(c.write) * t.write_aj +
         static_cast<std::int64_t>(c.shift) * t.shift_aj;
}

}  // namespace

std::int64_t EnergyBreakdown::compute_aj() const {
  return input_chains_aj + weight_arrays_aj + other_tracks_aj + mac_aj + nonlinear_aj + aggregation_aj +
         interconnect_aj;
}

EnergyBreakdown energy_breakdown(const EnergyLedger& l, const EnergyTable& t) {
  EnergyBreakdown b;
  b.input_chains_aj = track_aj(l.component(Component::kInputChain), t);
  b.weight_arrays_aj = track_aj(l.component(Component::kWeightArray), t);
  b.other_tracks_aj = track_aj(l.component(Component::kOther), t);
  const TrackCounters all = l.tracks_total();
  b.edc_aj = static_cast<std::int64_t>(all.edc_read) * t.read_aj + static_cast<std::int64_t>(all.edc_write) * t.write_aj;
  b.mac_aj = static_cast<std::int64_t>(l.mac_issue()) * t.mac_aj;
  b.nonlinear_aj = static_cast<std::int64_t>(l.nonlinear_eval()) * t.nonlinear_aj;
  b.aggregation_aj = static_cast<std::int64_t>(l.aggregation_hop()) * t.hop_aj;
  b.interconnect_aj = static_cast<std::int64_t>(l.interconnect_word()) * t.interconnect_aj;
  return b;
}

EnergyReport energy_report(const EnergyLedger& ledger, const EnergyTable& table) {
  EnergyReport r;
  r.ledger = ledger;
  r.breakdown = energy_breakdown(ledger, table);
  r.total_pj = aj_to_pj(r.breakdown.total_aj());
  return r;
}

namespace {

nlohmann::ordered_json counters_json(const TrackCounters& c) {
  return {{"read", c.read}, {"write", c.write}, {"shift", c.shift}, {"edc_read", c.edc_read}, {"edc_write", c.edc_write}};
}

}  // namespace

std::string EnergyReport::to_json() const {
  nlohmann::ordered_json j;
  const TrackCounters all = ledger.tracks_total();
  j["counters"] = {{"track_read", all.read},
                   {"track_write", all.write},
                   {"track_shift", all.shift},
                   {"edc_read", all.edc_read},
                   {"edc_write", all.edc_write},
                   {"mac_issue", ledger.mac_issue()},
                   {"nonlinear_eval", ledger.nonlinear_eval()},
                   {"aggregation_hop", ledger.aggregation_hop()},
                   {"interconnect_word", ledger.interconnect_word()}};
  j["components"] = {{"input_chains", counters_json(ledger.component(Component::kInputChain))},
                     {"weight_arrays", counters_json(ledger.component(Component::kWeightArray))},
                     {"other_tracks", counters_json(ledger.component(Component::kOther))}};
  j["energy_pj"] = {{"input_chains", aj_to_pj(breakdown.input_chains_aj)},
                    {"weight_arrays", aj_to_pj(breakdown.weight_arrays_aj)},
                    {"other_tracks", aj_to_pj(breakdown.other_tracks_aj)},
                    {"edc", aj_to_pj(breakdown.edc_aj)},
                    {"mac", aj_to_pj(breakdown.mac_aj)},
                    {"nonlinear", aj_to_pj(breakdown.nonlinear_aj)},
                    {"aggregation", aj_to_pj(breakdown.aggregation_aj)},
                    {"interconnect", aj_to_pj(breakdown.interconnect_aj)},
                    {"compute", aj_to_pj(breakdown.compute_aj())},
                    {"total", total_pj}};
  return j.dump(2);
}

std::string EnergyReport::to_csv() const {
  std::ostringstream os;
  os << "component,energy_aj,energy_pj\n";
  auto row = [&](const char* name, std::int64_t aj) { os << name << ',' << aj << ',' << aj_to_pj(aj) << '\n'; };
  row("input_chains", breakdown.input_chains_aj);
  row("weight_arrays", breakdown.weight_arrays_aj);
  row("other_tracks", breakdown.other_tracks_aj);
  row("edc", breakdown.edc_aj);
  row("mac", breakdown.mac_aj);
  row("nonlinear", breakdown.nonlinear_aj);
  row("aggregation", breakdown.aggregation_aj);
  row("interconnect", breakdown.interconnect_aj);
  row("total", breakdown.total_aj());
  return os.str();
}

}  // namespace rnnfast
