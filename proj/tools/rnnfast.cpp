//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include "rnnfast/error_model.hpp"
#include "rnnfast/lstm_core.hpp"
#include "rnnfast/manifest.hpp"
#include "rnnfast/mapping.hpp"
#include "rnnfast/nonlinear.hpp"
#include "rnnfast/reference_oracle.hpp"
#include "rnnfast/report.hpp"
#include "rnnfast/simulator.hpp"
#include "rnnfast/trace.hpp"

namespace {

using namespace rnnfast;

constexpr int kExitValidation = 1;
constexpr int kExitCapacity = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string manifest;
  std::string out;
  std::string trace;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("rnnfast");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RNNFAST_LOG")) {
    const spdlog::level::level_enum lvl = spdlog::level::from_str(env);
    if (lvl == spdlog::level::off && std::string(env) != "off") {
      spdlog::warn("RNNFAST_LOG='{}' not recognised; using warn", env);
    } else {
      spdlog::set_level(lvl);
    }
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError(path, "cannot open for writing");
  os << text;
  os.flush();
  if (!os) throw IoError(path, "write failed");
  spdlog::info("wrote {} ({} bytes)", path, text.size());
}

void emit(const Options& o, const ordered_json& j) {
  if (!o.out.empty()) write_file(o.out, j.dump(2) + "\n");
}

Manifest require_manifest(const Options& o) {
  if (o.manifest.empty()) throw ValidationError("--manifest", "required for this subcommand");
  spdlog::info("loading manifest {}", o.manifest);
  return load_manifest(o.manifest);
}

unsigned thread_count(const Options& o) {
  if (o.threads > 0) return o.threads;
  return std::max(1U, std::thread::hardware_concurrency());
}

int cmd_map(const Options& o) {
  const Manifest m = require_manifest(o);
  const Placement p = map_network(m.network, m.hardware);
  const UtilizationReport u = utilization_report(p);
  ordered_json j;
  j["name"] = m.name;
  j["network"] = to_json(m.network);
  j["hardware"] = to_json(m.hardware);
  j["placement"] = to_json(p);
  j["utilization"] = to_json(u);
  emit(o, j);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const LayerPlacement& lp = p.layers[l];
    std::printf("layer %zu: %zu %s neurons -> %zu units on %zu tiles in %zu group(s), %zu unit(s)/neuron\n", l,
                lp.spec.neurons, std::string(to_string(lp.spec.cell)).c_str(), lp.units, lp.tiles.size(),
                lp.group_tiles.size(), lp.units_per_neuron);
  }
  std::printf("total: %zu units, %zu PEs, %.2f%% of units\n", u.units_used, u.pes_used, 100.0 * u.unit_fraction);
  return 0;
}

int cmd_run(const Options& o) {
  const Manifest m = require_manifest(o);
  const ErrorConfig errors = resolve_error(m, o.seed);
  const Placement p = map_network(m.network, m.hardware);
  const NetworkWeights w = load_weights(m);
  const Sequence x = load_inputs(m);
  std::optional<std::ofstream> trace_file;
  std::optional<CsvTraceSink> sink;
  SimOptions opts;
  if (!o.trace.empty()) {
    trace_file.emplace(o.trace);
    if (!*trace_file) throw IoError(o.trace, "cannot open for writing");
    sink.emplace(*trace_file);
    opts.trace = &*sink;
  }
  spdlog::info("simulating {} layer(s), {} timestep(s)", m.network.layers.size(), m.network.timesteps);
  const RunResult r = simulate(p, w, x, errors, opts);
  if (trace_file) {
    trace_file->flush();
    if (!*trace_file) throw IoError(o.trace, "write failed");
    spdlog::info("trace: {} records", sink->lines());
  }
  ordered_json j;
  j["name"] = m.name;
  j["network"] = to_json(m.network);
  const ordered_json body = run_json(p, r, errors);
  for (const auto& [k, v] : body.items()) j[k] = v;
  emit(o, j);
  std::printf("cycles: %llu (%.3f us)\n", static_cast<unsigned long long>(r.total_cycles), r.seconds(p.hw) * 1e6);
  std::printf("energy: %.3f pJ (EDC %.3f pJ)\n", r.energy.total_pj, aj_to_pj(r.energy.breakdown.edc_aj));
  if (errors.active()) {
    std::printf("faults: chain %llu (corrected %llu), weight zeroed %llu, misaligned %llu, logic %llu\n",
                static_cast<unsigned long long>(r.faults.chain_overshifts),
                static_cast<unsigned long long>(r.faults.chain_corrections),
                static_cast<unsigned long long>(r.faults.weight_zeroed),
                static_cast<unsigned long long>(r.faults.weight_misaligned),
                static_cast<unsigned long long>(r.faults.logic_mac + r.faults.logic_nonlinear));
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  const Manifest m = require_manifest(o);
  const std::uint64_t seed = resolve_sweep_seed(m, o.seed);
  const Placement p = map_network(m.network, m.hardware);
  const NetworkWeights w = load_weights(m);
  const Sequence x = load_inputs(m);
  const SweepSpec& s = m.sweep;
  spdlog::info("sweep: {} p values x {} edc settings x {} seeds on {} threads", s.p.size(), s.edc.size(), s.seeds,
               thread_count(o));
  const std::vector<SweepCell> cells = sweep_cells(p, w, x, s.p, s.edc, s.sites, s.region, seed, s.seeds, thread_count(o));
  const std::string csv = sweep_csv(cells);
  if (!o.out.empty()) write_file(o.out, csv);
  std::printf("%s", csv.c_str());
  return 0;
}

int cmd_oracle(const Options& o) {
  const Manifest m = require_manifest(o);
  const NetworkWeights w = load_weights(m);
  const Sequence x = load_inputs(m);
  const FloatOutputs f = float_network(m.network, w, x);
  const NetworkOutputs q = evaluate_network(m.network, w, x);
  double worst = 0.0;
  for (std::size_t l = 0; l < f.size(); ++l)
    for (std::size_t t = 0; t < f[l].size(); ++t)
      for (std::size_t j = 0; j < f[l][t].size(); ++j) worst = std::max(worst, std::abs(f[l][t][j] - q[l][t][j].to_real()));
  ordered_json j;
  j["name"] = m.name;
  j["network"] = to_json(m.network);
  j["max_abs_diff_vs_fixed_point"] = worst;
  j["outputs"] = float_outputs_json(f);
  emit(o, j);
  std::printf("float reference: %zu layer(s) x %zu timestep(s); max |float - Q8.8| = %.6f\n", f.size(),
              m.network.timesteps, worst);
  return 0;
}

int cmd_dump_activation(const Options& o) {
  std::ostringstream os;
  os << "raw,z,sigmoid_approx,sigmoid_lut,sigmoid_exact,tanh_approx,tanh_lut,tanh_exact\n";
  os.precision(8);
  double worst_sig = 0.0;
  double worst_tanh = 0.0;
  for (int r = -2048; r <= 2048; ++r) {
    const Fixed z = Fixed::from_raw(static_cast<std::int16_t>(r));
    const double zr = z.to_real();
    const double se = 1.0 / (1.0 + std::exp(-zr));
    const double te = std::tanh(zr);
    const double sa = sigmoid_approx(z).to_real();
    const double ta = tanh_approx(z).to_real();
    worst_sig = std::max(worst_sig, std::abs(sa - se));
    worst_tanh = std::max(worst_tanh, std::abs(ta - te));
    os << r << ',' << zr << ',' << sa << ',' << sigmoid_lut(z).to_real() << ',' << se << ',' << ta << ','
       << tanh_lut(z).to_real() << ',' << te << '\n';
  }
  if (!o.out.empty()) write_file(o.out, os.str());
  std::printf("approx sigmoid max error %.6f, approx tanh max error %.6f over [-8, 8]\n", worst_sig, worst_tanh);
  return 0;
}

int cmd_report(const Options& o) {
  const Manifest m = require_manifest(o);
  const Placement p = map_network(m.network, m.hardware);
  const UtilizationReport u = utilization_report(p);
  ordered_json j;
  j["name"] = m.name;
  j["network"] = to_json(m.network);
  j["hardware"] = to_json(m.hardware);
  j["utilization"] = to_json(u);
  j["timing"] = timing_json(p);
  emit(o, j);
  const std::uint64_t cycles = analytic_cycles(p);
  std::printf("%s: %zu units (%.2f%%), %llu cycles = %.3f us at %.2f ns/cycle\n", m.name.empty() ? "network" : m.name.c_str(),
              u.units_used, 100.0 * u.unit_fraction, static_cast<unsigned long long>(cycles),
              static_cast<double>(cycles) * m.hardware.clock_period_ns * 1e-3, m.hardware.clock_period_ns);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  CLI::App app{"rnnfast: domain-wall-memory RNN accelerator simulator"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool manifest) {
    if (manifest) sub->add_option("--manifest", o.manifest, "manifest JSON")->required();
    sub->add_option("--out", o.out, "output path");
    sub->add_option("--trace", o.trace, "racetrack trace CSV");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--seed", o.seed, "error-injection seed (overrides error.seed)");
  };
  int (*handler)(const Options&) = nullptr;
  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
    bool manifest;
  };
  const Sub subs[] = {
      {"map", "place a network on the hardware and report utilization", cmd_map, true},
      {"run", "simulate a network cycle by cycle", cmd_run, true},
      {"sweep-errors", "fidelity sweep over fault probability and EDC", cmd_sweep, true},
      {"oracle-run", "double-precision reference outputs", cmd_oracle, true},
      {"dump-activation", "tabulate the activation implementations", cmd_dump_activation, false},
      {"report", "utilization and closed-form timing without simulation", cmd_report, true},
  };
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, s.manifest);
    sub->callback([&handler, fn = s.fn]() { handler = fn; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitValidation;
  }
  try {
    return handler(o);
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const DimensionMismatch& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return kExitValidation;
  } catch (const CapacityExceeded& e) {
    const Shortfall& s = e.shortfall();
    std::fprintf(stderr, "capacity exceeded: layer %zu needs %zu %s, %zu available\n", s.layer, s.required,
                 s.resource.c_str(), s.available);
    return kExitCapacity;
  } catch (const IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
}
