#include "vlq/nn_graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "vlq/parallel.hpp"

namespace vlq {

NeighborGraph build_nn_graph(const Codebook& codebook, uint32_t n) {
    uint32_t k = (uint32_t)codebook.k();
    if (n == 0 || n >= k) {
        throw std::runtime_error("build_nn_graph: need 0 < n < k");
    }
    NeighborGraph g;
    g.k = k;
    g.n = n;
    g.neighbor_ids.resize((size_t)k * n);
    g.edge_sq_len.resize((size_t)k * n);
    parallel_for(k, [&](size_t b, size_t e) {
        std::vector<std::pair<float, uint32_t>> cand(k - 1);
        for (size_t i = b; i < e; i++) {
            size_t w = 0;
            for (uint32_t j = 0; j < k; j++) {
                if (j == i) {
                    continue;
                }
                cand[w++] = {sqdist(codebook.centroid(i), codebook.centroid(j),
                                    codebook.dim),
                             j};
            }
            std::partial_sort(
                    cand.begin(), cand.begin() + n, cand.end(),
                    [](const auto& a, const auto& b2) {
                        return a.first < b2.first ||
                                (a.first == b2.first && a.second < b2.second);
                    });
            for (uint32_t j = 0; j < n; j++) {
                if (!(cand[j].first > 0)) {
                    throw std::runtime_error(
                            "build_nn_graph: duplicate centroids (zero-length edge)");
                }
                g.neighbor_ids[i * n + j] = cand[j].second;
                g.edge_sq_len[i * n + j] = cand[j].first;
            }
        }
    });
    return g;
}

} // namespace vlq
