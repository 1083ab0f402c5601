#pragma once

#include <cstdint>

#include "vlq/vecset.hpp"

namespace vlq {

// Gaussian-mixture data: `clusters` isotropic clusters with centers drawn
// uniformly in [0,1]^dim and per-coordinate stddev `spread`. Byte-for-byte
// reproducible for a given seed.
VectorSet gen_synthetic(
        size_t count,
        uint32_t dim,
        uint32_t clusters,
        float spread,
        uint64_t seed);

// Exact k-nearest neighbors by squared Euclidean distance, ties broken by
// ascending id. The independent oracle everything else is scored against.
GroundTruth brute_force_gt(
        const VectorSet& base,
        const VectorSet& queries,
        uint32_t k);

} // namespace vlq
