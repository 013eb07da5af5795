#pragma once

#include <vector>

#include "sptq/types.hpp"

namespace sptq {

struct PreciseGap {
  double gap = 0;    // zeta_1 - zeta_{r^2}
  double zeta1 = 0;
  double floor = 0;  // unit roundoff times the largest value
};

// Top-cluster gap of the segment ES in an infinite chain evaluated in
// 113-bit arithmetic. The MPS need not be canonical; right and left
// fixed points are refined by power iteration.
PreciseGap precise_segment_gap(const std::vector<cmat>& A, int l, int r);

}  // namespace sptq
