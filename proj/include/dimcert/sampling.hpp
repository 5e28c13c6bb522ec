#pragma once

#include <cstdint>
#include <vector>

#include "dimcert/region.hpp"

namespace dimcert {

/// Deterministic low-discrepancy samples of a ball: golden-angle spiral fill
/// plus an equal-sized boundary ring/shell. 2*count points total.
std::vector<Vec> ball_samples(const Region& r, int n, int count, uint64_t seed);

} // namespace dimcert
