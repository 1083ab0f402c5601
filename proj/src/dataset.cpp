#include "vlq/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "vlq/parallel.hpp"

namespace vlq {

VectorSet gen_synthetic(
        size_t count,
        uint32_t dim,
        uint32_t clusters,
        float spread,
        uint64_t seed) {
    if (dim == 0 || clusters == 0) {
        throw std::runtime_error("gen_synthetic: dim and clusters must be positive");
    }
    if (!(spread > 0)) {
        throw std::runtime_error("gen_synthetic: spread must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> unif(0.0f, 1.0f);
    std::vector<float> centers((size_t)clusters * dim);
    for (auto& v : centers) {
        v = unif(rng);
    }
    VectorSet set(dim, count);
    std::normal_distribution<float> gauss(0.0f, spread);
    std::uniform_int_distribution<uint32_t> pick(0, clusters - 1);
    // Sequential on purpose: the stream must not depend on thread count.
    for (size_t i = 0; i < count; i++) {
        uint32_t c = pick(rng);
        const float* ctr = centers.data() + (size_t)c * dim;
        float* out = set.row(i);
        for (uint32_t j = 0; j < dim; j++) {
            out[j] = ctr[j] + gauss(rng);
        }
    }
    return set;
}

GroundTruth brute_force_gt(
        const VectorSet& base,
        const VectorSet& queries,
        uint32_t k) {
    if (base.dim != queries.dim) {
        throw std::runtime_error("brute_force_gt: dimension mismatch");
    }
    size_t n = base.count();
    if ((size_t)k > n) {
        throw std::runtime_error("brute_force_gt: k exceeds base count");
    }
    size_t nq = queries.count();
    GroundTruth gt;
    gt.k_per_query = k;
    gt.ids.resize((size_t)k * nq);
    parallel_for(nq, [&](size_t qb, size_t qe) {
        std::vector<std::pair<float, uint32_t>> heap; // max-heap, worst on top
        auto better = [](const std::pair<float, uint32_t>& a,
                        const std::pair<float, uint32_t>& b) {
            return a.first < b.first ||
                    (a.first == b.first && a.second < b.second);
        };
        for (size_t q = qb; q < qe; q++) {
            const float* y = queries.row(q);
            heap.clear();
            for (size_t i = 0; i < n; i++) {
                float d = sqdist(y, base.row(i), base.dim);
                if (heap.size() < k) {
                    heap.emplace_back(d, (uint32_t)i);
                    std::push_heap(heap.begin(), heap.end(), better);
                } else if (better({d, (uint32_t)i}, heap.front())) {
                    std::pop_heap(heap.begin(), heap.end(), better);
                    heap.back() = {d, (uint32_t)i};
                    std::push_heap(heap.begin(), heap.end(), better);
                }
            }
            std::sort(heap.begin(), heap.end(), [](const auto& a, const auto& b) {
                return a.first < b.first ||
                        (a.first == b.first && a.second < b.second);
            });
            for (uint32_t j = 0; j < k; j++) {
                gt.ids[q * k + j] = heap[j].second;
            }
        }
    });
    return gt;
}

} // namespace vlq
