#pragma once

#include <span>
#include <vector>

#include "extremal/types.hpp"

namespace extremal::detail {

/// X_k = sum_l x_l exp(-2 pi i k l / N), any N >= 1. Thread-safe: planning
/// is serialized, execution runs on caller-owned buffers.
std::vector<cplx> forward_dft(std::span<const cplx> x);

}  // namespace extremal::detail
