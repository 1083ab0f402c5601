#include "vlq/line_quant.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace vlq {

float line_lambda(float a, float b, float c) {
    if (!(c > 0)) {
        throw std::runtime_error("line_lambda: degenerate edge (c == 0)");
    }
    return 0.5f * (a + c - b) / c;
}

float line_lambda_clamped(float a, float b, float c) {
    return std::clamp(line_lambda(a, b, c), 0.0f, 1.0f);
}

float line_sqdist(float a, float b, float c, float lambda) {
    return (1.0f - lambda) * a + (lambda * lambda - lambda) * c + lambda * b;
}

EdgeAssignment assign_edge(
        const float* centroid_sqdists,
        uint32_t centroid_id,
        const NeighborGraph& graph,
        bool clamp) {
    if (centroid_id >= graph.k) {
        throw std::runtime_error("assign_edge: invalid centroid id");
    }
    EdgeAssignment best;
    best.centroid_id = centroid_id;
    float a = centroid_sqdists[centroid_id];
    bool have = false;
    for (uint32_t j = 0; j < graph.n; j++) {
        float b = centroid_sqdists[graph.neighbor(centroid_id, j)];
        float c = graph.edge_len2(centroid_id, j);
        float lam = clamp ? line_lambda_clamped(a, b, c) : line_lambda(a, b, c);
        float d = line_sqdist(a, b, c, lam);
        if (!have || d < best.sq_dist) {
            have = true;
            best.edge_rank = j;
            best.lambda = lam;
            best.sq_dist = d;
        }
    }
    return best;
}

EdgeAssignment assign_edge(
        const float* x,
        uint32_t centroid_id,
        const Codebook& codebook,
        const NeighborGraph& graph,
        bool clamp) {
    if (centroid_id >= graph.k) {
        throw std::runtime_error("assign_edge: invalid centroid id");
    }
    // Only the distances to c_i and its neighbors are needed here.
    std::vector<float> dists((size_t)graph.k, 0.0f);
    dists[centroid_id] = sqdist(x, codebook.centroid(centroid_id), codebook.dim);
    for (uint32_t j = 0; j < graph.n; j++) {
        uint32_t s = graph.neighbor(centroid_id, j);
        dists[s] = sqdist(x, codebook.centroid(s), codebook.dim);
    }
    return assign_edge(dists.data(), centroid_id, graph, clamp);
}

} // namespace vlq
