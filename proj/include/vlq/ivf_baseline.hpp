#pragma once

#include <cstdint>
#include <vector>

#include "vlq/kmeans.hpp"
#include "vlq/pq.hpp"
#include "vlq/search.hpp"
#include "vlq/vecset.hpp"

namespace vlq {

// Single-level IVFADC comparison baseline: k posting lists of
// (id, PQ code of the residual from the region centroid).
struct IvfBaselineIndex {
    Codebook codebook;
    PQCodebooks pq;
    std::vector<std::vector<uint32_t>> ids;  // k lists
    std::vector<std::vector<uint8_t>> codes; // k lists, len * m
    uint64_t base_count = 0;
};

IvfBaselineIndex build_ivf_baseline(
        const VectorSet& base,
        const Codebook& codebook,
        const PQCodebooks& pq);

// Scans the w nearest regions with the standard residual-ADC lookup and
// returns the top-K per query.
std::vector<SearchResult> search_ivf_baseline(
        const IvfBaselineIndex& index,
        const VectorSet& queries,
        uint32_t w,
        uint32_t top_k,
        SearchStats* stats = nullptr);

} // namespace vlq
