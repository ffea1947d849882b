//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/error_model.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "rnnfast/mapping.hpp"
#include "rnnfast/simulator.hpp"

namespace rnnfast {

std::string_view to_string(BitRegion r) {
  switch (r) {
    case BitRegion::kAll: return "all";
    case BitRegion::kIntegerOnly: return "integer_only";
    case BitRegion::kFractionOnly: return "fraction_only";
    case BitRegion::kSignOnly: return "sign_only";
  }
  return "?";
}

BitRegion bit_region_from_string(std::string_view s) {
  if (s == "all") return BitRegion::kAll;
  if (s == "integer_only" || s == "integer") return BitRegion::kIntegerOnly;
  if (s == "fraction_only" || s == "fraction") return BitRegion::kFractionOnly;
  if (s == "sign_only" || s == "sign") return BitRegion::kSignOnly;
  throw std::invalid_argument("unknown bit region '" + std::string(s) + "'");
}

std::string_view to_string(FaultSite s) {
  switch (s) {
    case FaultSite::kInputChains: return "input_chains";
    case FaultSite::kWeightArrays: return "weight_arrays";
    case FaultSite::kLogic: return "logic";
  }
  return "?";
}

FaultSite fault_site_from_string(std::string_view s) {
  if (s == "input_chains" || s == "inputs") return FaultSite::kInputChains;
  if (s == "weight_arrays" || s == "weights") return FaultSite::kWeightArrays;
  if (s == "logic") return FaultSite::kLogic;
  throw std::invalid_argument("unknown fault site '" + std::string(s) + "'");
}

bool region_mask(int bit, BitRegion region) {
  if (bit < 0 || bit >= 16) throw std::out_of_range("region_mask: bit index outside [0, 16)");
  switch (region) {
    case BitRegion::kAll: return true;
    case BitRegion::kIntegerOnly: return bit >= 8;
    case BitRegion::kFractionOnly: return bit < 8;
    case BitRegion::kSignOnly: return bit == 15;
  }
  return false;
}

std::uint16_t region_bits(BitRegion region) {
  std::uint16_t m = 0;
  for (int b = 0; b < 16; ++b)
    if (region_mask(b, region)) m = static_cast<std::uint16_t>(m | (1U << b));
  return m;
}

ErrorConfig ErrorConfig::none() {
  ErrorConfig c;
  c.p_overshift = 0.0;
  c.sites = 0;
  return c;
}

std::uint8_t ErrorConfig::all_sites() {
  return static_cast<std::uint8_t>(FaultSite::kInputChains) | static_cast<std::uint8_t>(FaultSite::kWeightArrays) |
         static_cast<std::uint8_t>(FaultSite::kLogic);
}

std::string ErrorConfig::sites_string() const {
  std::string out;
  for (FaultSite s : {FaultSite::kInputChains, FaultSite::kWeightArrays, FaultSite::kLogic}) {
    if (!site(s)) continue;
    if (!out.empty()) out += '+';
    out += to_string(s);
  }
  return out.empty() ? "none" : out;
}

std::uint8_t sites_from_string(std::string_view s) {
  std::uint8_t out = 0;
  if (s == "none" || s.empty()) return 0;
  if (s == "all") return ErrorConfig::all_sites();
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find_first_of("+,", pos);
    const std::string_view part = s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    out |= static_cast<std::uint8_t>(fault_site_from_string(part));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

void ErrorConfig::validate() const {
  if (!(p_overshift >= 0.0 && p_overshift <= 1.0)) throw ValidationError("error.p_overshift", "must lie in [0, 1]");
  if (p_overshift > 0.0 && sites == 0) throw ValidationError("error.sites", "must be nonempty when p > 0");
}

FaultStream make_stream(const ErrorConfig& cfg, StreamSite site, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t h = stream_key(cfg.seed, {static_cast<std::uint64_t>(site)});
  for (std::uint64_t v : ids) h = stream_key(h, {v});
  return FaultStream(cfg.p_overshift, h);
}

namespace {

std::size_t argmax(const std::vector<Fixed>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i].raw() > v[best].raw()) best = i;
  return best;
}

}  // namespace

FidelityMetrics compare_outputs(const NetworkOutputs& ref, const NetworkOutputs& faulty) {
  FidelityMetrics m;
  if (ref.empty() || ref.back().empty()) return m;
  const Sequence& a = ref.back();
  const Sequence& b = faulty.back();
  if (a.size() != b.size()) throw DimensionMismatch("compare_outputs: timestep mismatch");
  std::size_t agree = 0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t].size() != b[t].size()) throw DimensionMismatch("compare_outputs: width mismatch");
    if (argmax(a[t]) == argmax(b[t])) ++agree;
  }
  m.argmax_agreement = static_cast<double>(agree) / static_cast<double>(a.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.back().size(); ++i) {
    const double r = a.back()[i].to_real();
    const double d = b.back()[i].to_real() - r;
    num += d * d;
    den += r * r;
  }
  if (den > 0.0) {
    m.nrmse = std::sqrt(num / den);
  } else {
    m.nrmse = num > 0.0 ? INFINITY : 0.0;
  }
  return m;
}

std::vector<FidelityRow> run_fidelity_experiment(const Placement& placement, const NetworkWeights& weights,
                                                 const Sequence& inputs, const std::vector<ErrorConfig>& grid,
                                                 unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("run_fidelity_experiment: empty grid");
  for (const auto& c : grid) c.validate();
  const RunResult clean = simulate(placement, weights, inputs);
  std::vector<FidelityRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      rows[i].cfg = grid[i];
      if (!grid[i].active()) {
        rows[i].metrics = compare_outputs(clean.outputs, clean.outputs);
        continue;
      }
      const RunResult r = simulate(placement, weights, inputs, grid[i]);
      rows[i].metrics = compare_outputs(clean.outputs, r.outputs);
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return rows;
}

std::string fidelity_csv(const std::vector<FidelityRow>& rows) {
  std::ostringstream os;
  os << "p,sites,region,edc_inputs,edc_weights,seed,argmax_agreement,nrmse\n";
  os.precision(10);
  for (const auto& r : rows) {
    os << r.cfg.p_overshift << ',' << r.cfg.sites_string() << ',' << to_string(r.cfg.region) << ','
       << (r.cfg.edc_inputs ? 1 : 0) << ',' << (r.cfg.edc_weights ? 1 : 0) << ',' << r.cfg.seed << ','
       << r.metrics.argmax_agreement << ',' << r.metrics.nrmse << '\n';
  }
  return os.str();
}

std::vector<double> overshift_sweep() { return {1e-7, 1e-6, 1e-5, 4.55e-5, 1e-4, 1e-3, 1e-2}; }

std::vector<ErrorConfig> edc_sweep_grid(std::uint64_t seed, const std::vector<double>& ps) {
  std::vector<ErrorConfig> grid;
  for (double p : ps) {
    for (bool edc : {true, false}) {
      ErrorConfig c;
      c.p_overshift = p;
      c.sites = ErrorConfig::all_sites();
      c.edc_inputs = edc;
      c.edc_weights = edc;
      c.seed = seed;
      grid.push_back(c);
    }
  }
  return grid;
}

std::vector<SweepCell> sweep_cells(const Placement& placement, const NetworkWeights& weights, const Sequence& inputs,
                                   const std::vector<double>& ps, const std::vector<bool>& edc, std::uint8_t sites,
                                   BitRegion region, std::uint64_t base_seed, std::size_t seeds, unsigned threads) {
  if (seeds == 0) throw std::invalid_argument("sweep_cells: seeds must be positive");
  std::vector<ErrorConfig> grid;
  std::vector<SweepCell> cells;
  for (double p : ps) {
    for (bool e : edc) {
      cells.push_back({p, e, sites, region, seeds, 0.0, 0.0});
      for (std::size_t s = 0; s < seeds; ++s) {
        ErrorConfig c;
        c.p_overshift = p;
        c.sites = sites;
        c.region = region;
        c.edc_inputs = e;
        c.edc_weights = e;
        c.seed = base_seed + s;
        grid.push_back(c);
      }
    }
  }
  const std::vector<FidelityRow> rows = run_fidelity_experiment(placement, weights, inputs, grid, threads);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SweepCell& cell = cells[i / seeds];
    cell.argmax_agreement += rows[i].metrics.argmax_agreement / static_cast<double>(seeds);
    cell.nrmse += rows[i].metrics.nrmse / static_cast<double>(seeds);
  }
  return cells;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream os;
  os << "p,edc,sites,region,seeds,argmax_agreement,nrmse\n";
  os.precision(10);
  for (const auto& c : cells) {
    ErrorConfig cfg;
    cfg.sites = c.sites;
    os << c.p << ',' << (c.edc ? "on" : "off") << ',' << cfg.sites_string() << ',' << to_string(c.region) << ','
       << c.seeds << ',' << c.argmax_agreement << ',' << c.nrmse << '\n';
  }
  return os.str();
}

Fixture reference_fixture(std::uint64_t seed) {
  Fixture f;
  f.spec.layers = {{CellType::kLstm, 128, 128}};
  f.spec.timesteps = 32;
  f.spec.activation = ActivationImpl::kApprox;
  f.weights = random_weights(f.spec, seed, 0.5);
  f.inputs = random_inputs(f.spec.timesteps, 128, seed ^ 0x5eedULL, 1.0);
  return f;
}

}  // namespace rnnfast
