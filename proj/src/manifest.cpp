//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/manifest.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <set>

namespace rnnfast {

using nlohmann::json;

namespace {

std::string key_path(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i) { return parent + "[" + std::to_string(i) + "]"; }

const char* type_name(const json& v) { return v.type_name(); }

void require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ValidationError(path.empty() ? "<root>" : path, std::string("expected object, got ") + type_name(v));
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items()) {
    if (!ok.count(k)) throw ValidationError(key_path(path, k), "unknown field");
  }
}

const json* find(const json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const char* key, const std::string& path) {
  const json* v = find(obj, key);
  if (!v) throw ValidationError(key_path(path, key), "required field missing");
  return *v;
}

std::uint64_t as_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ValidationError(path, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ValidationError(path, std::string("expected non-negative integer, got ") + type_name(v));
}

std::size_t as_size(const json& v, const std::string& path) { return static_cast<std::size_t>(as_u64(v, path)); }

std::uint32_t as_u32(const json& v, const std::string& path) {
  const std::uint64_t x = as_u64(v, path);
  if (x > std::numeric_limits<std::uint32_t>::max()) throw ValidationError(path, "out of range");
  return static_cast<std::uint32_t>(x);
}

std::int64_t as_i64(const json& v, const std::string& path) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  throw ValidationError(path, std::string("expected integer, got ") + type_name(v));
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) throw ValidationError(path, std::string("expected number, got ") + type_name(v));
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(path, "must be finite");
  return d;
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ValidationError(path, std::string("expected boolean, got ") + type_name(v));
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ValidationError(path, std::string("expected string, got ") + type_name(v));
  return v.get<std::string>();
}

template <typename F>
auto parse_enum(const json& v, const std::string& path, F&& parse) {
  const std::string s = as_string(v, path);
  try {
    return parse(s);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path, e.what());
  }
}

std::uint8_t parse_sites(const json& v, const std::string& path) {
  if (v.is_string()) return parse_enum(v, path, [](const std::string& s) { return sites_from_string(s); });
  if (!v.is_array()) throw ValidationError(path, std::string("expected string or array, got ") + type_name(v));
  std::uint8_t out = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out |= static_cast<std::uint8_t>(
        parse_enum(v[i], index_path(path, i), [](const std::string& s) { return fault_site_from_string(s); }));
  }
  return out;
}

NetworkSpec parse_network(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown(v, path, {"layers", "timesteps", "activation"});
  NetworkSpec spec;
  const std::string lp = key_path(path, "layers");
  const json& layers = need(v, "layers", path);
  if (!layers.is_array()) throw ValidationError(lp, std::string("expected array, got ") + type_name(layers));
  if (layers.empty()) throw ValidationError(lp, "must contain at least one layer");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string p = index_path(lp, i);
    const json& l = layers[i];
    require_object(l, p);
    reject_unknown(l, p, {"cell", "neurons", "inputs"});
    LayerSpec ls;
    ls.cell = parse_enum(need(l, "cell", p), key_path(p, "cell"), [](const std::string& s) { return cell_type_from_string(s); });
    ls.neurons = as_size(need(l, "neurons", p), key_path(p, "neurons"));
    if (const json* in = find(l, "inputs")) {
      ls.inputs = as_size(*in, key_path(p, "inputs"));
    } else if (i > 0) {
      ls.inputs = spec.layers.back().neurons;
    } else {
      throw ValidationError(key_path(p, "inputs"), "required field missing");
    }
    spec.layers.push_back(ls);
  }
  spec.timesteps = as_size(need(v, "timesteps", path), key_path(path, "timesteps"));
  if (const json* a = find(v, "activation")) {
    spec.activation = parse_enum(*a, key_path(path, "activation"),
                                 [](const std::string& s) { return activation_impl_from_string(s); });
  }
  spec.validate();
  return spec;
}

EnergyTable parse_energy(const json& v, const std::string& path) {
  require_object(v, path);
  EnergyTable t;
  const std::map<std::string, std::int64_t EnergyTable::*> fields = {
      {"read_pj", &EnergyTable::read_aj},      {"shift_pj", &EnergyTable::shift_aj},
      {"write_pj", &EnergyTable::write_aj},    {"mac_pj", &EnergyTable::mac_aj},
      {"nonlinear_pj", &EnergyTable::nonlinear_aj}, {"hop_pj", &EnergyTable::hop_aj},
      {"interconnect_pj", &EnergyTable::interconnect_aj}};
  for (const auto& [k, val] : v.items()) {
    const auto it = fields.find(k);
    if (it == fields.end()) throw ValidationError(key_path(path, k), "unknown field");
    const double pj = as_double(val, key_path(path, k));
    if (pj < 0.0) throw ValidationError(key_path(path, k), "must be non-negative");
    t.*(it->second) = pj_to_aj(pj);
  }
  return t;
}

HardwareConfig parse_hardware(const json& v, const std::string& path) {
  require_object(v, path);
  HardwareConfig hw;
  using Setter = std::function<void(const json&, const std::string&)>;
  const std::map<std::string, Setter> fields = {
      {"lstm_units_per_tile", [&](const json& x, const std::string& p) { hw.lstm_units_per_tile = as_size(x, p); }},
      {"pes_per_unit", [&](const json& x, const std::string& p) { hw.pes_per_unit = as_size(x, p); }},
      {"weights_per_pe", [&](const json& x, const std::string& p) { hw.weights_per_pe = as_size(x, p); }},
      {"input_track_words", [&](const json& x, const std::string& p) { hw.input_track_words = as_size(x, p); }},
      {"tiles_per_row", [&](const json& x, const std::string& p) { hw.tiles_per_row = as_size(x, p); }},
      {"rows_per_group", [&](const json& x, const std::string& p) { hw.rows_per_group = as_size(x, p); }},
      {"groups", [&](const json& x, const std::string& p) { hw.groups = as_size(x, p); }},
      {"blank_pad", [&](const json& x, const std::string& p) { hw.blank_pad = as_size(x, p); }},
      {"interconnect_latency_cycles",
       [&](const json& x, const std::string& p) { hw.interconnect_latency_cycles = as_u32(x, p); }},
      {"lookahead_cycles", [&](const json& x, const std::string& p) { hw.lookahead_cycles = as_i64(x, p); }},
      {"clock_period_ns", [&](const json& x, const std::string& p) { hw.clock_period_ns = as_double(x, p); }},
      {"read_cycles", [&](const json& x, const std::string& p) { hw.read_cycles = as_u32(x, p); }},
      {"shift_cycles", [&](const json& x, const std::string& p) { hw.shift_cycles = as_u32(x, p); }},
      {"write_cycles", [&](const json& x, const std::string& p) { hw.write_cycles = as_u32(x, p); }},
      {"mac_stages", [&](const json& x, const std::string& p) { hw.mac_stages = as_u32(x, p); }},
      {"mac_cycles_per_stage", [&](const json& x, const std::string& p) { hw.mac_cycles_per_stage = as_u32(x, p); }},
      {"mac_issue_interval", [&](const json& x, const std::string& p) { hw.mac_issue_interval = as_u32(x, p); }},
      {"activation_latency_approx",
       [&](const json& x, const std::string& p) { hw.activation_latency_approx = as_u32(x, p); }},
      {"activation_latency_lut", [&](const json& x, const std::string& p) { hw.activation_latency_lut = as_u32(x, p); }},
      {"aggregation_hop_cycles", [&](const json& x, const std::string& p) { hw.aggregation_hop_cycles = as_u32(x, p); }},
      {"weight_rewind_shifts", [&](const json& x, const std::string& p) { hw.weight_rewind_shifts = as_i64(x, p); }},
      {"energy", [&](const json& x, const std::string& p) { hw.energy = parse_energy(x, p); }},
  };
  for (const auto& [k, val] : v.items()) {
    const auto it = fields.find(k);
    if (it == fields.end()) throw ValidationError(key_path(path, k), "unknown field");
    it->second(val, key_path(path, k));
  }
  hw.validate();
  return hw;
}

TensorSource parse_tensor(const json& v, const std::string& path, const std::filesystem::path& base,
                          const char* layout) {
  require_object(v, path);
  TensorSource t;
  if (const json* r = find(v, "random")) {
    reject_unknown(v, path, {"random"});
    const std::string rp = key_path(path, "random");
    require_object(*r, rp);
    reject_unknown(*r, rp, {"seed", "range"});
    t.seed = as_u64(need(*r, "seed", rp), key_path(rp, "seed"));
    if (const json* rg = find(*r, "range")) t.range = as_double(*rg, key_path(rp, "range"));
    if (!(t.range > 0.0)) throw ValidationError(key_path(rp, "range"), "must be positive");
    return t;
  }
  reject_unknown(v, path, {"path", "encoding", "layout"});
  const std::filesystem::path p = as_string(need(v, "path", path), key_path(path, "path"));
  t.path = p.is_absolute() ? p : base / p;
  if (const json* e = find(v, "encoding")) {
    t.encoding = parse_enum(*e, key_path(path, "encoding"), [](const std::string& s) {
      if (s == "raw-q8.8-le") return TensorEncoding::kRawQ88Le;
      if (s == "json-real") return TensorEncoding::kJsonReal;
      throw std::invalid_argument("expected raw-q8.8-le or json-real, got '" + s + "'");
    });
  }
  if (const json* l = find(v, "layout")) {
    const std::string s = as_string(*l, key_path(path, "layout"));
    if (s != layout) throw ValidationError(key_path(path, "layout"), std::string("only '") + layout + "' is supported");
  }
  return t;
}

void parse_error(const json& v, const std::string& path, Manifest& m) {
  require_object(v, path);
  reject_unknown(v, path, {"p_overshift", "sites", "region", "edc_inputs", "edc_weights", "seed"});
  ErrorConfig c = ErrorConfig::none();
  if (const json* p = find(v, "p_overshift")) c.p_overshift = as_double(*p, key_path(path, "p_overshift"));
  if (const json* s = find(v, "sites")) c.sites = parse_sites(*s, key_path(path, "sites"));
  if (const json* r = find(v, "region")) {
    c.region = parse_enum(*r, key_path(path, "region"), [](const std::string& s) { return bit_region_from_string(s); });
  }
  if (const json* e = find(v, "edc_inputs")) c.edc_inputs = as_bool(*e, key_path(path, "edc_inputs"));
  if (const json* e = find(v, "edc_weights")) c.edc_weights = as_bool(*e, key_path(path, "edc_weights"));
  if (const json* s = find(v, "seed")) m.error_seed = as_u64(*s, key_path(path, "seed"));
  c.validate();
  m.error = c;
}

SweepSpec parse_sweep(const json& v, const std::string& path) {
  require_object(v, path);
  reject_unknown(v, path, {"p", "edc", "seeds", "sites", "region"});
  SweepSpec s;
  if (const json* p = find(v, "p")) {
    const std::string pp = key_path(path, "p");
    if (!p->is_array() || p->empty()) throw ValidationError(pp, "expected nonempty array");
    s.p.clear();
    for (std::size_t i = 0; i < p->size(); ++i) {
      const double x = as_double((*p)[i], index_path(pp, i));
      if (x < 0.0 || x > 1.0) throw ValidationError(index_path(pp, i), "must lie in [0, 1]");
      s.p.push_back(x);
    }
  }
  if (const json* e = find(v, "edc")) {
    const std::string ep = key_path(path, "edc");
    if (!e->is_array() || e->empty()) throw ValidationError(ep, "expected nonempty array");
    s.edc.clear();
    for (std::size_t i = 0; i < e->size(); ++i) s.edc.push_back(as_bool((*e)[i], index_path(ep, i)));
  }
  if (const json* n = find(v, "seeds")) {
    s.seeds = as_size(*n, key_path(path, "seeds"));
    if (s.seeds == 0) throw ValidationError(key_path(path, "seeds"), "must be positive");
  }
  if (const json* x = find(v, "sites")) {
    s.sites = parse_sites(*x, key_path(path, "sites"));
    if (s.sites == 0) throw ValidationError(key_path(path, "sites"), "must be nonempty");
  }
  if (const json* r = find(v, "region")) {
    s.region = parse_enum(*r, key_path(path, "region"), [](const std::string& x) { return bit_region_from_string(x); });
  }
  return s;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p, "cannot open for reading");
  std::vector<std::uint8_t> out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(p, "read failed");
  return out;
}

json read_json(const std::filesystem::path& p) {
  const std::vector<std::uint8_t> bytes = read_bytes(p);
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(p.filename().string(), std::string("malformed JSON: ") + e.what());
  }
}

void flatten_reals(const json& v, const std::string& path, std::vector<Fixed>& out) {
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten_reals(v[i], index_path(path, i), out);
    return;
  }
  out.push_back(Fixed::from_real(as_double(v, path)));
}

std::vector<Fixed> load_tensor(const TensorSource& t, const std::string& field, std::size_t expected) {
  std::vector<Fixed> values;
  if (t.encoding == TensorEncoding::kRawQ88Le) {
    const std::vector<std::uint8_t> bytes = read_bytes(*t.path);
    if (bytes.size() != expected * 2) {
      throw ValidationError(field + ".path", "expected " + std::to_string(expected * 2) + " bytes (" +
                                                 std::to_string(expected) + " Q8.8 words), found " +
                                                 std::to_string(bytes.size()));
    }
    values = decode_q88_le(bytes);
  } else {
    flatten_reals(read_json(*t.path), field + ".path", values);
    if (values.size() != expected) {
      throw ValidationError(field + ".path", "expected " + std::to_string(expected) + " values, found " +
                                                 std::to_string(values.size()));
    }
  }
  return values;
}

}  // namespace

std::string_view to_string(TensorEncoding e) {
  return e == TensorEncoding::kRawQ88Le ? "raw-q8.8-le" : "json-real";
}

Manifest parse_manifest(const json& doc, const std::filesystem::path& base_dir) {
  require_object(doc, "");
  reject_unknown(doc, "", {"name", "description", "network", "hardware", "weights", "inputs", "error", "sweep"});
  Manifest m;
  if (const json* n = find(doc, "name")) m.name = as_string(*n, "name");
  if (const json* d = find(doc, "description")) as_string(*d, "description");
  m.network = parse_network(need(doc, "network", ""), "network");
  if (const json* h = find(doc, "hardware")) m.hardware = parse_hardware(*h, "hardware");
  m.weights = parse_tensor(need(doc, "weights", ""), "weights", base_dir, "gate-major");
  m.inputs = parse_tensor(need(doc, "inputs", ""), "inputs", base_dir, "timestep-major");
  if (const json* e = find(doc, "error")) parse_error(*e, "error", m);
  if (const json* s = find(doc, "sweep")) m.sweep = parse_sweep(*s, "sweep");
  return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_json(path), path.parent_path());
}

ErrorConfig resolve_error(const Manifest& m, std::optional<std::uint64_t> seed_override) {
  ErrorConfig c = m.error;
  const std::optional<std::uint64_t> seed = seed_override ? seed_override : m.error_seed;
  if (c.active() && !seed) throw ValidationError("error.seed", "required when faults are injected (or pass --seed)");
  c.seed = seed.value_or(0);
  return c;
}

std::uint64_t resolve_sweep_seed(const Manifest& m, std::optional<std::uint64_t> seed_override) {
  if (seed_override) return *seed_override;
  if (!m.error_seed) throw ValidationError("error.seed", "required for error sweeps (or pass --seed)");
  return *m.error_seed;
}

NetworkWeights load_weights(const Manifest& m) {
  if (!m.weights.path) return random_weights(m.network, m.weights.seed, m.weights.range);
  const std::vector<Fixed> flat = load_tensor(m.weights, "weights", weight_count(m.network));
  return unflatten(m.network, flat);
}

Sequence load_inputs(const Manifest& m) {
  const std::size_t width = m.network.layers.front().inputs;
  const std::size_t t = m.network.timesteps;
  if (!m.inputs.path) return random_inputs(t, width, m.inputs.seed, m.inputs.range);
  const std::vector<Fixed> flat = load_tensor(m.inputs, "inputs", t * width);
  Sequence seq(t, std::vector<Fixed>(width));
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = 0; j < width; ++j) seq[i][j] = flat[i * width + j];
  return seq;
}

std::vector<std::uint8_t> encode_q88_le(std::span<const Fixed> values) {
  std::vector<std::uint8_t> out;
  out.reserve(values.size() * 2);
  for (Fixed v : values) {
    out.push_back(static_cast<std::uint8_t>(v.bits() & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v.bits() >> 8));
  }
  return out;
}

std::vector<Fixed> decode_q88_le(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) throw std::invalid_argument("decode_q88_le: odd byte count");
  std::vector<Fixed> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Fixed::from_bits(static_cast<std::uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8)));
  }
  return out;
}

}  // namespace rnnfast
