#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace vlq {

// Flat row-major collection of 32-bit float vectors.
struct VectorSet {
    uint32_t dim = 0;
    std::vector<float> data; // count() * dim values

    VectorSet() = default;
    VectorSet(uint32_t d, size_t n) : dim(d), data((size_t)d * n) {}

    size_t count() const {
        return dim == 0 ? 0 : data.size() / dim;
    }

    const float* row(size_t i) const {
        return data.data() + i * dim;
    }
    float* row(size_t i) {
        return data.data() + i * dim;
    }

    // Throws if data length is not a multiple of dim or any value is
    // non-finite.
    void validate() const;
};

// Exact nearest-neighbor lists, one row of k_per_query ids per query,
// sorted by ascending true squared distance (ties by ascending id).
struct GroundTruth {
    uint32_t k_per_query = 0;
    std::vector<uint32_t> ids;

    size_t count() const {
        return k_per_query == 0 ? 0 : ids.size() / k_per_query;
    }
    const uint32_t* row(size_t q) const {
        return ids.data() + q * k_per_query;
    }
};

// Squared Euclidean distance.
float sqdist(const float* a, const float* b, size_t d);
float sqnorm(const float* a, size_t d);
float dot(const float* a, const float* b, size_t d);

} // namespace vlq
