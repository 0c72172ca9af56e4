#pragma once

#include "tacsim/solver/solver.hpp"

namespace tacsim {

// Binary state frame: 8-byte magic "TSIMFRM1", uint64 vertex count, then
// little-endian doubles: time, rotation (row-major 9), translation (3),
// x (3n), v (3n). Round-trips bit-for-bit.
void save_state_frame(const std::string& path, const SimState& state);
SimState load_state_frame(const std::string& path);

}  // namespace tacsim
