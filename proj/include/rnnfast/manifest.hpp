//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rnnfast/error_model.hpp"
#include "rnnfast/mapping.hpp"
#include "rnnfast/network.hpp"

namespace rnnfast {

class IoError : public std::runtime_error {
 public:
  IoError(std::filesystem::path path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what), path_(std::move(path)) {}
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

enum class TensorEncoding { kRawQ88Le, kJsonReal };

std::string_view to_string(TensorEncoding e);

// Either a file or a seeded uniform draw in [-range, range].
struct TensorSource {
  std::optional<std::filesystem::path> path;  // resolved against the manifest directory
  TensorEncoding encoding = TensorEncoding::kRawQ88Le;
  std::uint64_t seed = 0;
  double range = 1.0;
};

struct SweepSpec {
  std::vector<double> p = overshift_sweep();
  std::vector<bool> edc = {true, false};
  std::size_t seeds = 1;
  std::uint8_t sites = ErrorConfig::all_sites();
  BitRegion region = BitRegion::kAll;
};

struct Manifest {
  std::string name;
  NetworkSpec network;
  HardwareConfig hardware;
  TensorSource weights;
  TensorSource inputs;
  ErrorConfig error = ErrorConfig::none();
  std::optional<std::uint64_t> error_seed;
  SweepSpec sweep;
};

Manifest parse_manifest(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
Manifest load_manifest(const std::filesystem::path& path);

// Error configuration with the seed resolved; a seed is mandatory once faults are active.
ErrorConfig resolve_error(const Manifest& m, std::optional<std::uint64_t> seed_override = std::nullopt);
// Base seed for sweeps; always mandatory.
std::uint64_t resolve_sweep_seed(const Manifest& m, std::optional<std::uint64_t> seed_override = std::nullopt);

NetworkWeights load_weights(const Manifest& m);
Sequence load_inputs(const Manifest& m);

std::vector<std::uint8_t> encode_q88_le(std::span<const Fixed> values);
std::vector<Fixed> decode_q88_le(std::span<const std::uint8_t> bytes);

}  // namespace rnnfast
