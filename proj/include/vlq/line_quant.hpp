#pragma once

#include <cstdint>

#include "vlq/kmeans.hpp"
#include "vlq/nn_graph.hpp"

namespace vlq {

// Projection parameter of x onto the line through c_i and c_j, expressed
// through the three squared distances a = |x-c_i|^2, b = |x-c_j|^2,
// c = |c_j-c_i|^2. Unclamped: lambda = 0.5 * (a + c - b) / c.
float line_lambda(float a, float b, float c);

// Same, clipped to [0,1] so the anchor stays on the segment.
float line_lambda_clamped(float a, float b, float c);

// Squared distance from x to the point (1-lambda)*c_i + lambda*c_j:
// (1-lambda)*a + (lambda^2-lambda)*c + lambda*b.
float line_sqdist(float a, float b, float c, float lambda);

// Edge chosen for a point within a first-level region.
struct EdgeAssignment {
    uint32_t centroid_id = 0;
    uint32_t edge_rank = 0; // position within the centroid's neighbor row
    float lambda = 0;
    float sq_dist = 0; // distance to the anchor at that lambda
};

// Picks, among the n edges of centroid i, the one whose anchor is closest
// to x (ties to the lowest rank). `centroid_sqdists` must hold |x - c|^2
// for every centroid in the codebook. The same lambda (clamped when
// `clamp` is set) is used for ranking and for the returned assignment.
EdgeAssignment assign_edge(
        const float* centroid_sqdists,
        uint32_t centroid_id,
        const NeighborGraph& graph,
        bool clamp);

// Convenience overload computing the distances from x itself.
EdgeAssignment assign_edge(
        const float* x,
        uint32_t centroid_id,
        const Codebook& codebook,
        const NeighborGraph& graph,
        bool clamp);

} // namespace vlq
