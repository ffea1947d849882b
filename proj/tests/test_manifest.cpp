//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "rnnfast/lstm_core.hpp"
#include "rnnfast/manifest.hpp"
#include "rnnfast/report.hpp"

using namespace rnnfast;
using nlohmann::json;

namespace {

json base_doc() {
  return json::parse(R"({
    "network": {"layers": [{"cell": "lstm", "neurons": 3, "inputs": 2}, {"cell": "vanilla", "neurons": 2}],
                "timesteps": 2},
    "weights": {"random": {"seed": 1, "range": 0.5}},
    "inputs": {"random": {"seed": 2}}
  })");
}

std::string failing_path(const json& doc) {
  try {
    parse_manifest(doc);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return "";
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("rnnfast_manifest_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  void write(const std::string& name, const std::string& body) const {
    std::ofstream(path / name, std::ios::binary) << body;
  }
};

}  // namespace

TEST_CASE("minimal manifest") {
  const Manifest m = parse_manifest(base_doc());
  REQUIRE(m.network.layers.size() == 2);
  CHECK(m.network.layers[1].inputs == 3);
  CHECK(m.network.layers[1].cell == CellType::kVanilla);
  CHECK(m.network.activation == ActivationImpl::kApprox);
  CHECK_FALSE(m.weights.path.has_value());
  CHECK(m.weights.range == 0.5);
  CHECK(m.inputs.range == 1.0);
  CHECK_FALSE(m.error.active());
  CHECK(resolve_error(m).p_overshift == 0.0);
  CHECK_THROWS_AS(resolve_sweep_seed(m), ValidationError);
  CHECK(resolve_sweep_seed(m, 9) == 9);
  CHECK(load_weights(m).layers.size() == 2);
  CHECK(load_inputs(m).size() == 2);
}

TEST_CASE("validation errors carry field paths") {
  json d = base_doc();
  d["network"]["layers"][1]["inputs"] = 4;
  CHECK(failing_path(d) == "network.layers[1].inputs");

  d = base_doc();
  d["network"]["layers"][0]["cell"] = "transformer";
  CHECK(failing_path(d) == "network.layers[0].cell");

  d = base_doc();
  d["network"]["timesteps"] = -1;
  CHECK(failing_path(d) == "network.timesteps");

  d = base_doc();
  d["hardware"] = {{"tiles_per_row", 0}};
  CHECK(failing_path(d) == "hardware.tiles_per_row");

  d = base_doc();
  d["hardware"] = {{"energy", {{"read_pj", "x"}}}};
  CHECK(failing_path(d) == "hardware.energy.read_pj");

  d = base_doc();
  d["surprise"] = 1;
  CHECK(failing_path(d) == "surprise");

  d = base_doc();
  d["weights"] = {{"random", {{"range", 1.0}}}};
  CHECK(failing_path(d) == "weights.random.seed");

  d = base_doc();
  d["weights"] = {{"path", "w.bin"}, {"encoding", "base64"}};
  CHECK(failing_path(d) == "weights.encoding");

  d = base_doc();
  d["inputs"] = {{"path", "x.bin"}, {"layout", "feature-major"}};
  CHECK(failing_path(d) == "inputs.layout");

  d = base_doc();
  d["error"] = {{"p_overshift", 2.0}, {"sites", "all"}};
  CHECK(failing_path(d) == "error.p_overshift");

  d = base_doc();
  d["error"] = {{"sites", {"logic", "cache"}}};
  CHECK(failing_path(d) == "error.sites[1]");

  d = base_doc();
  d["sweep"] = {{"p", {1e-3, -1.0}}};
  CHECK(failing_path(d) == "sweep.p[1]");

  d = base_doc();
  d.erase("network");
  CHECK(failing_path(d) == "network");
}

TEST_CASE("error seed is mandatory for fault injection") {
  json d = base_doc();
  d["error"] = {{"p_overshift", 1e-3}, {"sites", "all"}, {"edc_inputs", true}};
  const Manifest m = parse_manifest(d);
  CHECK(m.error.active());
  CHECK(m.error.edc_inputs);
  CHECK_FALSE(m.error.edc_weights);
  try {
    resolve_error(m);
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "error.seed");
  }
  CHECK(resolve_error(m, 42).seed == 42);
  d["error"]["seed"] = 7;
  CHECK(resolve_error(parse_manifest(d)).seed == 7);
}

TEST_CASE("hardware overrides") {
  json d = base_doc();
  d["hardware"] = {{"weights_per_pe", 100}, {"lookahead_cycles", 0}, {"energy", {{"read_pj", 1.5}}}};
  const Manifest m = parse_manifest(d);
  CHECK(m.hardware.weights_per_pe == 100);
  CHECK(m.hardware.lookahead() == 0);
  CHECK(m.hardware.energy.read_aj == 1'500'000);
  CHECK(m.hardware.energy.shift_aj == 240'000);
}

TEST_CASE("raw Q8.8 little-endian tensors") {
  const std::vector<Fixed> v = {Fixed::from_raw(1), Fixed::from_raw(-2), Fixed::from_raw(0x1234)};
  const std::vector<std::uint8_t> b = encode_q88_le(v);
  CHECK(b == std::vector<std::uint8_t>{0x01, 0x00, 0xFE, 0xFF, 0x34, 0x12});
  CHECK(decode_q88_le(b) == v);

  TempDir dir;
  json d = base_doc();
  const NetworkSpec spec = parse_manifest(d).network;
  const std::size_t n = weight_count(spec);
  std::vector<Fixed> flat(n);
  for (std::size_t i = 0; i < n; ++i) flat[i] = Fixed::from_raw(static_cast<std::int16_t>(i));
  const std::vector<std::uint8_t> bytes = encode_q88_le(flat);
  dir.write("w.bin", std::string(bytes.begin(), bytes.end()));
  d["weights"] = {{"path", "w.bin"}, {"encoding", "raw-q8.8-le"}, {"layout", "gate-major"}};
  const Manifest m = parse_manifest(d, dir.path);
  const NetworkWeights w = load_weights(m);
  // Gate-major: gate i's W_x row-major, then W_h, then bias; then gate f.
  CHECK(w.layers[0].gates[0].wx.at(0, 0).raw() == 0);
  CHECK(w.layers[0].gates[0].wx.at(0, 1).raw() == 1);
  CHECK(w.layers[0].gates[0].wx.at(1, 0).raw() == 2);
  CHECK(w.layers[0].gates[0].wh.at(0, 0).raw() == 6);
  CHECK(w.layers[0].gates[0].bias[0].raw() == 15);
  CHECK(w.layers[0].gates[1].wx.at(0, 0).raw() == 18);
  CHECK(flatten(w) == flat);

  dir.write("short.bin", std::string(bytes.begin(), bytes.end() - 2));
  d["weights"]["path"] = "short.bin";
  try {
    load_weights(parse_manifest(d, dir.path));
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.path() == "weights.path");
  }
  d["weights"]["path"] = "absent.bin";
  CHECK_THROWS_AS(load_weights(parse_manifest(d, dir.path)), IoError);
}

TEST_CASE("json-real inputs") {
  TempDir dir;
  dir.write("x.json", "[[0.5, -0.25], [1.0, 2.0]]");
  json d = base_doc();
  d["inputs"] = {{"path", "x.json"}, {"encoding", "json-real"}, {"layout", "timestep-major"}};
  const Sequence x = load_inputs(parse_manifest(d, dir.path));
  REQUIRE(x.size() == 2);
  CHECK(x[0][0] == Fixed::from_real(0.5));
  CHECK(x[0][1] == Fixed::from_real(-0.25));
  CHECK(x[1][1] == Fixed::from_real(2.0));
  dir.write("bad.json", "[0.5, -0.25, 1.0]");
  d["inputs"]["path"] = "bad.json";
  CHECK_THROWS_AS(load_inputs(parse_manifest(d, dir.path)), ValidationError);
  dir.write("junk.json", "[0.5,");
  d["inputs"]["path"] = "junk.json";
  CHECK_THROWS_AS(load_inputs(parse_manifest(d, dir.path)), ValidationError);
}

TEST_CASE("run reports are deterministic") {
  const Manifest m = parse_manifest(base_doc());
  const Placement p = map_network(m.network, m.hardware);
  const RunResult a = simulate(p, load_weights(m), load_inputs(m));
  const RunResult b = simulate(p, load_weights(m), load_inputs(m));
  CHECK(run_json(p, a, ErrorConfig::none()).dump() == run_json(p, b, ErrorConfig::none()).dump());
  const ordered_json j = run_json(p, a, ErrorConfig::none());
  CHECK(j["analytic_cycles"] == j["total_cycles"]);
  CHECK(to_json(p)["layers"][0]["units"] == 3);
}

TEST_CASE("presets parse and map") {
  const std::filesystem::path dir = std::filesystem::path(RNNFAST_PRESET_DIR);
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    const Manifest m = load_manifest(entry.path());
    CHECK_NOTHROW(map_network(m.network, m.hardware));
    ++count;
  }
  CHECK(count == 8);
  const Manifest fx = load_manifest(dir / "fixture-1x128.json");
  const Fixture ref = reference_fixture();
  CHECK(load_weights(fx).layers[0].gates[2].wh.data() == ref.weights.layers[0].gates[2].wh.data());
  CHECK(load_inputs(fx) == ref.inputs);
}
