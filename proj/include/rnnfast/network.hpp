//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rnnfast/fixed_point.hpp"
#include "rnnfast/nonlinear.hpp"

namespace rnnfast {

// Carries the offending field path, e.g. "network.layers[1].inputs".
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::invalid_argument(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class DimensionMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class CellType { kLstm, kGru, kVanilla };

std::string_view to_string(CellType c);
CellType cell_type_from_string(std::string_view s);

// LSTM: i f o c. GRU: z r n. Vanilla: h.
std::size_t gate_count(CellType c);

struct LayerSpec {
  CellType cell = CellType::kLstm;
  std::size_t neurons = 0;
  std::size_t inputs = 0;
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;
  std::size_t timesteps = 1;
  ActivationImpl activation = ActivationImpl::kApprox;

  void validate() const;
};

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Fixed& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  Fixed at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const Fixed> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<Fixed> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::vector<Fixed>& data() { return data_; }
  const std::vector<Fixed>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Fixed> data_;
};

struct GateWeights {
  Matrix wx;  // neurons x inputs
  Matrix wh;  // neurons x neurons
  std::vector<Fixed> bias;
};

struct LayerWeights {
  CellType cell = CellType::kLstm;
  std::vector<GateWeights> gates;

  std::size_t neurons() const { return gates.empty() ? 0 : gates.front().bias.size(); }
  std::size_t inputs() const { return gates.empty() ? 0 : gates.front().wx.cols(); }
};

struct NetworkWeights {
  std::vector<LayerWeights> layers;
};

// [timestep][element]
using Sequence = std::vector<std::vector<Fixed>>;
// [layer][timestep][neuron]
using NetworkOutputs = std::vector<Sequence>;

LayerWeights zero_layer(const LayerSpec& spec);
NetworkWeights zero_weights(const NetworkSpec& spec);
NetworkWeights random_weights(const NetworkSpec& spec, std::uint64_t seed, double range);
Sequence random_inputs(std::size_t timesteps, std::size_t width, std::uint64_t seed, double range);

void check_weights(const NetworkSpec& spec, const NetworkWeights& w);
void check_inputs(const NetworkSpec& spec, const Sequence& inputs);

// Flat order per layer: for each gate, W_x row-major, W_h row-major, then bias.
std::size_t weight_count(const NetworkSpec& spec);
std::vector<Fixed> flatten(const NetworkWeights& w);
NetworkWeights unflatten(const NetworkSpec& spec, std::span<const Fixed> flat);

}  // namespace rnnfast
