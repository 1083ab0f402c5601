#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vlq/kmeans.hpp"
#include "vlq/line_quant.hpp"
#include "vlq/nn_graph.hpp"
#include "vlq/pq.hpp"
#include "vlq/vecset.hpp"

namespace vlq {

// Uniform 256-level quantizer for the stored lambda values.
struct LambdaQuant {
    float lo = 0.0f;
    float hi = 1.0f;
};

uint8_t quantize_lambda(float lambda, const LambdaQuant& q);
float dequantize_lambda(uint8_t b, const LambdaQuant& q);

// One second-level cell: parallel arrays of point id, m-byte PQ code and
// quantized lambda.
struct PostingList {
    std::vector<uint32_t> ids;
    std::vector<uint8_t> codes;   // ids.size() * m
    std::vector<uint8_t> lambdas; // ids.size()

    size_t size() const {
        return ids.size();
    }
};

// Two-level inverted index: k first-level regions, each split into n
// edge cells. Cell id = centroid_id * n + edge_rank.
struct InvertedIndex {
    Codebook codebook;
    NeighborGraph graph;
    PQCodebooks pq;
    LambdaQuant lambda_quant;
    bool clamp_lambda = true;
    uint64_t base_count = 0;
    std::vector<PostingList> lists; // k * n
    // Inner products <slice p of centroid i, sub-centroid (p,j)>,
    // laid out [i][p][j], size k * m * 256.
    std::vector<float> t3;

    uint32_t k() const {
        return graph.k;
    }
    uint32_t n() const {
        return graph.n;
    }
    uint32_t m() const {
        return pq.m;
    }
    uint32_t dim() const {
        return codebook.dim;
    }
    size_t cell(uint32_t centroid_id, uint32_t edge_rank) const {
        return (size_t)centroid_id * graph.n + edge_rank;
    }
    const float* t3_row(uint32_t centroid_id, uint32_t p) const {
        return t3.data() +
                ((size_t)centroid_id * pq.m + p) * PQCodebooks::ksub;
    }

    // Checks the partition and table invariants; throws on violation.
    void validate() const;
};

// Centroid/sub-centroid inner-product table (term3/term4 source).
std::vector<float> compute_t3(const Codebook& codebook, const PQCodebooks& pq);

// Min/max unclamped lambda over the base set, for unclamped-range
// quantization.
LambdaQuant observe_lambda_range(
        const VectorSet& base,
        const Codebook& codebook,
        const NeighborGraph& graph);

// Assigns every base point to a cell (nearest centroid, then nearest
// edge), PQ-encodes the displacement from the anchor at the exact lambda,
// and stores the byte-quantized lambda. Processes `batch` points at a
// time; the result does not depend on batch size or thread count.
InvertedIndex build_index(
        const VectorSet& base,
        const Codebook& codebook,
        const NeighborGraph& graph,
        const PQCodebooks& pq,
        const LambdaQuant& q,
        bool clamp_lambda = true,
        size_t batch = 100000);

// Binary index file, magic "VLQ1". `store_t3` trades file size for load
// time; when absent the table is recomputed on load.
void serialize_index(
        const InvertedIndex& index,
        const std::string& path,
        bool store_t3 = true);
InvertedIndex deserialize_index(const std::string& path);

} // namespace vlq
