#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vlq/index.hpp"

namespace vlq {

struct QueryParams {
    uint32_t w1 = 64;   // first-level regions to visit
    float alpha = 0.25; // fraction of the w1*n second-level regions kept
    uint32_t top_k = 10;

    uint32_t w2(uint32_t n) const {
        uint32_t full = w1 * n;
        uint32_t w = (uint32_t)((double)alpha * full);
        return w == 0 ? 1 : (w > full ? full : w);
    }
};

struct SearchResult {
    std::vector<uint32_t> ids;
    std::vector<float> dists; // ascending
};

struct SearchStats {
    uint64_t scanned_candidates = 0;
};

// Per-query scratch: distances from the query to every first-level
// centroid, plus the query/sub-centroid inner-product table (term5).
struct QueryWorkspace {
    std::vector<float> centroid_sqdists; // k
    std::vector<float> t5;               // m * 256

    const float* t5_row(uint32_t p) const {
        return t5.data() + (size_t)p * PQCodebooks::ksub;
    }
};

// Exact top-w1 centroids by squared distance (ties lowest id); fills the
// full distance array in `workspace` for stage two.
std::vector<uint32_t> first_level_scan(
        const float* y,
        const Codebook& codebook,
        uint32_t w1,
        QueryWorkspace& workspace);

// Ranks the w1*n edges of the visited cells by the query's own projected
// point-to-segment distance and keeps the best w2. Ties resolve by
// (centroid_id, edge_rank).
std::vector<std::pair<uint32_t, uint32_t>> second_level_rank(
        const QueryWorkspace& workspace,
        const std::vector<uint32_t>& top_cells,
        const NeighborGraph& graph,
        uint32_t w2);

// Fills workspace.t5 with <y-slice p, sub-centroid (p,j)>.
void query_term5(const float* y, const PQCodebooks& pq, QueryWorkspace& workspace);

// Table-decomposed ADC distance for one posting entry of cell
// (centroid_id, edge_rank). Identical, up to rounding, to the direct
// evaluation |y - anchor - pq_decode(code)|^2 at the dequantized lambda.
float adc_distance(
        const uint8_t* code,
        uint8_t lambda_byte,
        uint32_t centroid_id,
        uint32_t edge_rank,
        const QueryWorkspace& workspace,
        const InvertedIndex& index);

// K smallest by distance, ties by ascending id; returns everything when
// fewer than K candidates exist.
SearchResult select_topk(
        std::vector<std::pair<float, uint32_t>>& candidates,
        uint32_t top_k);

SearchResult search_query(
        const InvertedIndex& index,
        const float* y,
        const QueryParams& params,
        SearchStats* stats = nullptr);

// Queries run independently in parallel; per-query results are identical
// to sequential execution.
std::vector<SearchResult> search_batch(
        const InvertedIndex& index,
        const VectorSet& queries,
        const QueryParams& params,
        SearchStats* stats = nullptr);

} // namespace vlq
