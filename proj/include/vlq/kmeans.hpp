#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vlq/vecset.hpp"

namespace vlq {

// First-level VQ codebook with cached squared centroid norms.
struct Codebook {
    uint32_t dim = 0;
    std::vector<float> centroids; // k * dim
    std::vector<float> sq_norms;  // k

    size_t k() const {
        return sq_norms.size();
    }
    const float* centroid(size_t i) const {
        return centroids.data() + i * dim;
    }
    void refresh_sq_norms();
};

// Lloyd iterations with k-means++ seeding. Empty clusters are repaired by
// re-seeding from the farthest member of the highest-error cluster. The
// result depends only on the inputs and seed, not on the thread count.
Codebook train_kmeans(
        const VectorSet& train,
        uint32_t k,
        uint32_t iters,
        uint64_t seed);

// Nearest centroid by squared distance, ties to the lowest id.
std::pair<uint32_t, float> assign_nearest(const float* x, const Codebook& codebook);

// Total quantization error of `set` against `codebook` (sum of squared
// distances to the nearest centroid).
double quantization_error(const VectorSet& set, const Codebook& codebook);

} // namespace vlq
