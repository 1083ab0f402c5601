#pragma once

#include <cstdint>
#include <vector>

#include "vlq/vecset.hpp"

namespace vlq {

// Product quantizer: m sub-codebooks of 256 centroids each, so a vector
// encodes to exactly m bytes.
struct PQCodebooks {
    static constexpr uint32_t ksub = 256;

    uint32_t dim = 0;
    uint32_t m = 0;
    std::vector<float> sub_centroids; // m * 256 * sub_dim()
    std::vector<float> sub_sq_norms;  // m * 256

    uint32_t sub_dim() const {
        return m == 0 ? 0 : dim / m;
    }
    const float* sub_centroid(uint32_t p, uint32_t j) const {
        return sub_centroids.data() + ((size_t)p * ksub + j) * sub_dim();
    }
    void refresh_sq_norms();
};

// Independent 256-centroid k-means per subspace slice; dim must be
// divisible by m and the training set must hold at least 256 points.
PQCodebooks train_pq(
        const VectorSet& train,
        uint32_t m,
        uint32_t iters,
        uint64_t seed);

// Per-slice nearest sub-centroid, ties to the lowest id.
void pq_encode(const float* r, const PQCodebooks& pq, uint8_t* code);

// Concatenation of the indexed sub-centroids.
void pq_decode(const uint8_t* code, const PQCodebooks& pq, float* out);

} // namespace vlq
