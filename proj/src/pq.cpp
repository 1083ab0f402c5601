#include "vlq/pq.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "vlq/kmeans.hpp"

namespace vlq {

void PQCodebooks::refresh_sq_norms() {
    sub_sq_norms.resize((size_t)m * ksub);
    for (uint32_t p = 0; p < m; p++) {
        for (uint32_t j = 0; j < ksub; j++) {
            sub_sq_norms[(size_t)p * ksub + j] = sqnorm(sub_centroid(p, j), sub_dim());
        }
    }
}

PQCodebooks train_pq(
        const VectorSet& train,
        uint32_t m,
        uint32_t iters,
        uint64_t seed) {
    if (m == 0 || train.dim % m != 0) {
        throw std::runtime_error("train_pq: dim must be divisible by m");
    }
    if (train.count() < PQCodebooks::ksub) {
        throw std::runtime_error("train_pq: need at least 256 training points");
    }
    PQCodebooks pq;
    pq.dim = train.dim;
    pq.m = m;
    uint32_t dsub = pq.sub_dim();
    pq.sub_centroids.resize((size_t)m * PQCodebooks::ksub * dsub);
    size_t n = train.count();
    VectorSet slice(dsub, n);
    for (uint32_t p = 0; p < m; p++) {
        for (size_t i = 0; i < n; i++) {
            const float* src = train.row(i) + (size_t)p * dsub;
            std::copy_n(src, dsub, slice.row(i));
        }
        Codebook sub = train_kmeans(
                slice, PQCodebooks::ksub, iters, seed + 0x9e3779b97f4a7c15ULL * p);
        std::copy_n(sub.centroids.data(), (size_t)PQCodebooks::ksub * dsub,
                    pq.sub_centroids.data() + (size_t)p * PQCodebooks::ksub * dsub);
    }
    pq.refresh_sq_norms();
    return pq;
}

void pq_encode(const float* r, const PQCodebooks& pq, uint8_t* code) {
    uint32_t dsub = pq.sub_dim();
    for (uint32_t p = 0; p < pq.m; p++) {
        const float* x = r + (size_t)p * dsub;
        uint32_t best = 0;
        float best_d = std::numeric_limits<float>::max();
        for (uint32_t j = 0; j < PQCodebooks::ksub; j++) {
            float d = sqdist(x, pq.sub_centroid(p, j), dsub);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        code[p] = (uint8_t)best;
    }
}

void pq_decode(const uint8_t* code, const PQCodebooks& pq, float* out) {
    uint32_t dsub = pq.sub_dim();
    for (uint32_t p = 0; p < pq.m; p++) {
        std::copy_n(pq.sub_centroid(p, code[p]), dsub, out + (size_t)p * dsub);
    }
}

} // namespace vlq
