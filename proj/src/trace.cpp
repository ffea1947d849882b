//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "rnnfast/trace.hpp"

namespace rnnfast {

std::string_view to_string(TraceOp op) {
  switch (op) {
    case TraceOp::kRead: return "R";
    case TraceOp::kWrite: return "W";
    case TraceOp::kShift: return "S";
    case TraceOp::kEdcCorrected: return "EDC_CORR";
    case TraceOp::kEdcZero: return "EDC_ZERO";
  }
  return "?";
}

CsvTraceSink::CsvTraceSink(std::ostream& os, bool header) : os_(os) {
  if (header) os_ << "cycle,track_id,op,detail\n";
}

void CsvTraceSink::record(std::uint64_t cycle, std::string_view track_id, TraceOp op, std::string_view detail) {
  os_ << cycle << ',' << track_id << ',' << to_string(op) << ',' << detail << '\n';
  ++lines_;
}

}  // namespace rnnfast
