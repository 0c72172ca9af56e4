#pragma once

#include "tacsim/geometry/broadphase.hpp"

namespace tacsim {

// Conservative time of impact over candidate pairs for the linear motion
// x_start -> x_end (additive CCD). Returns t_max in (0, 1] such that
// x_start + t*(x_end - x_start) stays intersection-free for all t <= t_max;
// 1 means no impact. Throws SolverError when x_start already intersects a
// candidate pair (contract violation).
double ccd_toi(const std::vector<Vec3>& x_start, const std::vector<Vec3>& x_end,
               const std::vector<CandidatePair>& pairs, double slack = 0.1);

// Per-pair variant on explicit point arrays (4 start points, 4 end points,
// PT order {p,t0,t1,t2}, EE order {a0,a1,b0,b1}).
double ccd_toi_pair(CandidatePair::Kind kind, const std::array<Vec3, 4>& start,
                    const std::array<Vec3, 4>& end, double slack);

}  // namespace tacsim
