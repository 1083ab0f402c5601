#pragma once

#include <cstdint>
#include <vector>

#include "vlq/kmeans.hpp"

namespace vlq {

// Directed n-nearest-neighbor graph over the first-level centroids. Row i
// lists the n centroids closest to centroid i (ascending squared distance,
// ties by ascending id) together with the squared edge lengths.
struct NeighborGraph {
    uint32_t k = 0;
    uint32_t n = 0;
    std::vector<uint32_t> neighbor_ids; // k * n
    std::vector<float> edge_sq_len;     // k * n

    uint32_t neighbor(uint32_t i, uint32_t j) const {
        return neighbor_ids[(size_t)i * n + j];
    }
    float edge_len2(uint32_t i, uint32_t j) const {
        return edge_sq_len[(size_t)i * n + j];
    }
};

// Exact all-pairs construction; requires n < k and pairwise-distinct
// centroids (a zero-length edge aborts the build).
NeighborGraph build_nn_graph(const Codebook& codebook, uint32_t n);

} // namespace vlq
