#include "vlq/index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vlq/parallel.hpp"

namespace vlq {

uint8_t quantize_lambda(float lambda, const LambdaQuant& q) {
    float clamped = std::clamp(lambda, q.lo, q.hi);
    float step = (q.hi - q.lo) / 256.0f;
    int level = (int)((clamped - q.lo) / step);
    return (uint8_t)std::clamp(level, 0, 255);
}

float dequantize_lambda(uint8_t b, const LambdaQuant& q) {
    return q.lo + ((float)b + 0.5f) * (q.hi - q.lo) / 256.0f;
}

void InvertedIndex::validate() const {
    if (lists.size() != (size_t)graph.k * graph.n) {
        throw std::runtime_error("InvertedIndex: wrong number of lists");
    }
    if (!(lambda_quant.lo < lambda_quant.hi)) {
        throw std::runtime_error("InvertedIndex: bad lambda range");
    }
    std::vector<uint8_t> seen(base_count, 0);
    size_t total = 0;
    for (const auto& list : lists) {
        if (list.codes.size() != list.ids.size() * pq.m ||
            list.lambdas.size() != list.ids.size()) {
            throw std::runtime_error("InvertedIndex: inconsistent list arrays");
        }
        for (uint32_t id : list.ids) {
            if (id >= base_count || seen[id]) {
                throw std::runtime_error(
                        "InvertedIndex: ids do not partition the base set");
            }
            seen[id] = 1;
        }
        total += list.size();
    }
    if (total != base_count) {
        throw std::runtime_error("InvertedIndex: list lengths do not sum to N");
    }
    if (t3.size() != (size_t)graph.k * pq.m * PQCodebooks::ksub) {
        throw std::runtime_error("InvertedIndex: wrong t3 size");
    }
}

std::vector<float> compute_t3(const Codebook& codebook, const PQCodebooks& pq) {
    if (codebook.dim != pq.dim) {
        throw std::runtime_error("compute_t3: dimension mismatch");
    }
    size_t k = codebook.k();
    uint32_t dsub = pq.sub_dim();
    std::vector<float> t3(k * pq.m * PQCodebooks::ksub);
    parallel_for(k, [&](size_t b, size_t e) {
        for (size_t i = b; i < e; i++) {
            for (uint32_t p = 0; p < pq.m; p++) {
                const float* slice = codebook.centroid(i) + (size_t)p * dsub;
                float* dst = t3.data() +
                        (i * pq.m + p) * PQCodebooks::ksub;
                for (uint32_t j = 0; j < PQCodebooks::ksub; j++) {
                    dst[j] = dot(slice, pq.sub_centroid(p, j), dsub);
                }
            }
        }
    });
    return t3;
}

namespace {

struct PointAssignment {
    uint32_t centroid_id;
    uint32_t edge_rank;
    float lambda;
};

// Nearest centroid + best edge for one point, reusing the full
// centroid-distance row for both stages.
PointAssignment assign_point(
        const float* x,
        const Codebook& codebook,
        const NeighborGraph& graph,
        bool clamp,
        std::vector<float>& dist_scratch) {
    size_t k = codebook.k();
    dist_scratch.resize(k);
    uint32_t best = 0;
    float best_d = std::numeric_limits<float>::max();
    for (size_t i = 0; i < k; i++) {
        float d = sqdist(x, codebook.centroid(i), codebook.dim);
        dist_scratch[i] = d;
        if (d < best_d) {
            best_d = d;
            best = (uint32_t)i;
        }
    }
    EdgeAssignment ea = assign_edge(dist_scratch.data(), best, graph, clamp);
    return {best, ea.edge_rank, ea.lambda};
}

} // namespace

LambdaQuant observe_lambda_range(
        const VectorSet& base,
        const Codebook& codebook,
        const NeighborGraph& graph) {
    size_t n = base.count();
    if (n == 0) {
        return {0.0f, 1.0f};
    }
    std::vector<float> lambdas(n);
    parallel_for(n, [&](size_t b, size_t e) {
        std::vector<float> scratch;
        for (size_t i = b; i < e; i++) {
            lambdas[i] = assign_point(
                                 base.row(i), codebook, graph, false, scratch)
                                 .lambda;
        }
    });
    auto [lo, hi] = std::minmax_element(lambdas.begin(), lambdas.end());
    if (!(*lo < *hi)) {
        return {*lo, *lo + 1.0f}; // all equal: widen to a valid range
    }
    return {*lo, *hi};
}

InvertedIndex build_index(
        const VectorSet& base,
        const Codebook& codebook,
        const NeighborGraph& graph,
        const PQCodebooks& pq,
        const LambdaQuant& q,
        bool clamp_lambda,
        size_t batch) {
    if (base.dim != codebook.dim || base.dim != pq.dim) {
        throw std::runtime_error("build_index: dimension mismatch");
    }
    size_t n = base.count();
    if (n == 0) {
        throw std::runtime_error("build_index: empty base set");
    }
    if (batch == 0) {
        batch = n;
    }
    InvertedIndex index;
    index.codebook = codebook;
    index.graph = graph;
    index.pq = pq;
    index.lambda_quant = q;
    index.clamp_lambda = clamp_lambda;
    index.base_count = n;
    index.lists.resize((size_t)graph.k * graph.n);
    index.t3 = compute_t3(codebook, pq);

    std::vector<PointAssignment> assigns(std::min(batch, n));
    std::vector<uint8_t> codes((size_t)std::min(batch, n) * pq.m);
    std::vector<uint8_t> lambda_bytes(std::min(batch, n));
    for (size_t b0 = 0; b0 < n; b0 += batch) {
        size_t bn = std::min(batch, n - b0);
        parallel_for(bn, [&](size_t wb, size_t we) {
            std::vector<float> scratch;
            std::vector<float> r(base.dim);
            for (size_t w = wb; w < we; w++) {
                size_t i = b0 + w;
                const float* x = base.row(i);
                PointAssignment pa = assign_point(
                        x, codebook, graph, clamp_lambda, scratch);
                assigns[w] = pa;
                const float* ci = codebook.centroid(pa.centroid_id);
                const float* sj = codebook.centroid(
                        graph.neighbor(pa.centroid_id, pa.edge_rank));
                // Displacement from the anchor at the exact lambda; the
                // quantization error surfaces only at query time.
                for (uint32_t d = 0; d < base.dim; d++) {
                    r[d] = x[d] -
                            ((1.0f - pa.lambda) * ci[d] + pa.lambda * sj[d]);
                }
                pq_encode(r.data(), pq, codes.data() + w * pq.m);
                lambda_bytes[w] = quantize_lambda(pa.lambda, q);
            }
        });
        // Appends ordered by point id: deterministic for any batch size
        // or thread count.
        for (size_t w = 0; w < bn; w++) {
            const PointAssignment& pa = assigns[w];
            PostingList& list =
                    index.lists[index.cell(pa.centroid_id, pa.edge_rank)];
            list.ids.push_back((uint32_t)(b0 + w));
            list.codes.insert(
                    list.codes.end(), codes.data() + w * pq.m,
                    codes.data() + (w + 1) * pq.m);
            list.lambdas.push_back(lambda_bytes[w]);
        }
    }
    return index;
}

} // namespace vlq
