#pragma once

#include <string>

#include "mcfod/milp/model.hpp"

namespace mcfod::milp {

struct MpsOptions {
  // Write an OBJSENSE MAX section and the coefficients as they are. Off by
  // default: the objective is negated and minimized, which every reader
  // understands.
  bool objsense_max = false;
};

// Free-format MPS in insertion order. Deferred rows are not written. The
// objective constant is left out; callers add it back.
std::string emit_mps(const MilpModel& model, const MpsOptions& opts = {});

// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace mcfod::milp
