#include "vlq/ivf_baseline.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "vlq/parallel.hpp"

namespace vlq {

IvfBaselineIndex build_ivf_baseline(
        const VectorSet& base,
        const Codebook& codebook,
        const PQCodebooks& pq) {
    if (base.dim != codebook.dim || base.dim != pq.dim) {
        throw std::runtime_error("build_ivf_baseline: dimension mismatch");
    }
    size_t n = base.count();
    size_t k = codebook.k();
    IvfBaselineIndex index;
    index.codebook = codebook;
    index.pq = pq;
    index.base_count = n;
    index.ids.resize(k);
    index.codes.resize(k);
    std::vector<uint32_t> assign(n);
    std::vector<uint8_t> code((size_t)n * pq.m);
    parallel_for(n, [&](size_t b, size_t e) {
        std::vector<float> r(base.dim);
        for (size_t i = b; i < e; i++) {
            const float* x = base.row(i);
            uint32_t c = assign_nearest(x, codebook).first;
            assign[i] = c;
            const float* ctr = codebook.centroid(c);
            for (uint32_t d = 0; d < base.dim; d++) {
                r[d] = x[d] - ctr[d];
            }
            pq_encode(r.data(), pq, code.data() + i * pq.m);
        }
    });
    for (size_t i = 0; i < n; i++) {
        uint32_t c = assign[i];
        index.ids[c].push_back((uint32_t)i);
        index.codes[c].insert(
                index.codes[c].end(), code.data() + i * pq.m,
                code.data() + (i + 1) * pq.m);
    }
    return index;
}

std::vector<SearchResult> search_ivf_baseline(
        const IvfBaselineIndex& index,
        const VectorSet& queries,
        uint32_t w,
        uint32_t top_k,
        SearchStats* stats) {
    if (queries.dim != index.codebook.dim) {
        throw std::runtime_error("search_ivf_baseline: dimension mismatch");
    }
    size_t k = index.codebook.k();
    if (w == 0 || w > k) {
        throw std::runtime_error("search_ivf_baseline: need 0 < w <= k");
    }
    uint32_t m = index.pq.m;
    uint32_t dsub = index.pq.sub_dim();
    size_t nq = queries.count();
    std::vector<SearchResult> results(nq);
    std::atomic<uint64_t> scanned{0};
    parallel_for(nq, [&](size_t qb, size_t qe) {
        std::vector<std::pair<float, uint32_t>> order(k);
        std::vector<float> residual(queries.dim);
        std::vector<float> lut((size_t)m * PQCodebooks::ksub);
        std::vector<std::pair<float, uint32_t>> candidates;
        uint64_t local_scanned = 0;
        for (size_t q = qb; q < qe; q++) {
            const float* y = queries.row(q);
            for (size_t i = 0; i < k; i++) {
                order[i] = {sqdist(y, index.codebook.centroid(i), queries.dim),
                            (uint32_t)i};
            }
            std::partial_sort(
                    order.begin(), order.begin() + w, order.end(),
                    [](const auto& a, const auto& b) {
                        return a.first < b.first ||
                                (a.first == b.first && a.second < b.second);
                    });
            candidates.clear();
            for (uint32_t r = 0; r < w; r++) {
                uint32_t region = order[r].second;
                const auto& ids = index.ids[region];
                if (ids.empty()) {
                    continue;
                }
                // Per-region residual lookup table (one |.|^2 per
                // sub-centroid).
                const float* ctr = index.codebook.centroid(region);
                for (uint32_t d = 0; d < queries.dim; d++) {
                    residual[d] = y[d] - ctr[d];
                }
                for (uint32_t p = 0; p < m; p++) {
                    const float* slice = residual.data() + (size_t)p * dsub;
                    float* dst = lut.data() + (size_t)p * PQCodebooks::ksub;
                    for (uint32_t j = 0; j < PQCodebooks::ksub; j++) {
                        dst[j] = sqdist(slice, index.pq.sub_centroid(p, j), dsub);
                    }
                }
                const uint8_t* codes = index.codes[region].data();
                for (size_t e = 0; e < ids.size(); e++) {
                    float d = 0;
                    const uint8_t* code = codes + e * m;
                    for (uint32_t p = 0; p < m; p++) {
                        d += lut[(size_t)p * PQCodebooks::ksub + code[p]];
                    }
                    candidates.emplace_back(d, ids[e]);
                }
            }
            local_scanned += candidates.size();
            results[q] = select_topk(candidates, top_k);
        }
        scanned.fetch_add(local_scanned);
    });
    if (stats) {
        stats->scanned_candidates += scanned.load();
    }
    return results;
}

} // namespace vlq
