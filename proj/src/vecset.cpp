#include "vlq/vecset.hpp"

#include <cmath>
#include <stdexcept>

namespace vlq {

void VectorSet::validate() const {
    if (dim == 0 && !data.empty()) {
        throw std::runtime_error("VectorSet: nonempty data with dim 0");
    }
    if (dim != 0 && data.size() % dim != 0) {
        throw std::runtime_error("VectorSet: data length not a multiple of dim");
    }
    for (float v : data) {
        if (!std::isfinite(v)) {
            throw std::runtime_error("VectorSet: non-finite value");
        }
    }
}

float sqdist(const float* a, const float* b, size_t d) {
    float acc = 0;
    for (size_t i = 0; i < d; i++) {
        float diff = a[i] - b[i];
        acc += diff * diff;
    }
    return acc;
}

float sqnorm(const float* a, size_t d) {
    float acc = 0;
    for (size_t i = 0; i < d; i++) {
        acc += a[i] * a[i];
    }
    return acc;
}

float dot(const float* a, const float* b, size_t d) {
    float acc = 0;
    for (size_t i = 0; i < d; i++) {
        acc += a[i] * b[i];
    }
    return acc;
}

} // namespace vlq
