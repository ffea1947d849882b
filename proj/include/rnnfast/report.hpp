//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <json.hpp>

#include "rnnfast/mapping.hpp"
#include "rnnfast/reference_oracle.hpp"
#include "rnnfast/simulator.hpp"

namespace rnnfast {

using ordered_json = nlohmann::ordered_json;

ordered_json to_json(const NetworkSpec& spec);
ordered_json to_json(const HardwareConfig& hw);
ordered_json to_json(const Placement& p);
ordered_json to_json(const UtilizationReport& u);
ordered_json to_json(const ErrorConfig& c);

// Outputs as raw Q8.8 integers per layer and timestep, plus the last layer as reals.
ordered_json run_json(const Placement& p, const RunResult& r, const ErrorConfig& errors);
ordered_json timing_json(const Placement& p);
ordered_json float_outputs_json(const FloatOutputs& out);

}  // namespace rnnfast
