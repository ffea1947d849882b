//
// Copyright © 2026 The rnnfast authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <ostream>
#include <string_view>

namespace rnnfast {

enum class TraceOp { kRead, kWrite, kShift, kEdcCorrected, kEdcZero };

std::string_view to_string(TraceOp op);

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(std::uint64_t cycle, std::string_view track_id, TraceOp op, std::string_view detail) = 0;
};

// cycle,track_id,op,detail
class CsvTraceSink : public TraceSink {
 public:
  explicit CsvTraceSink(std::ostream& os, bool header = true);
  void record(std::uint64_t cycle, std::string_view track_id, TraceOp op, std::string_view detail) override;
  std::uint64_t lines() const { return lines_; }

 private:
  std::ostream& os_;
  std::uint64_t lines_ = 0;
};

}  // namespace rnnfast
