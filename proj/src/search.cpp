#include "vlq/search.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>

#include "vlq/parallel.hpp"

namespace vlq {

std::vector<uint32_t> first_level_scan(
        const float* y,
        const Codebook& codebook,
        uint32_t w1,
        QueryWorkspace& workspace) {
    size_t k = codebook.k();
    if (w1 == 0 || w1 > k) {
        throw std::runtime_error("first_level_scan: need 0 < w1 <= k");
    }
    workspace.centroid_sqdists.resize(k);
    for (size_t i = 0; i < k; i++) {
        workspace.centroid_sqdists[i] = sqdist(y, codebook.centroid(i), codebook.dim);
    }
    std::vector<uint32_t> order(k);
    for (size_t i = 0; i < k; i++) {
        order[i] = (uint32_t)i;
    }
    auto cmp = [&](uint32_t a, uint32_t b) {
        float da = workspace.centroid_sqdists[a];
        float db = workspace.centroid_sqdists[b];
        return da < db || (da == db && a < b);
    };
    std::partial_sort(order.begin(), order.begin() + w1, order.end(), cmp);
    order.resize(w1);
    return order;
}

std::vector<std::pair<uint32_t, uint32_t>> second_level_rank(
        const QueryWorkspace& workspace,
        const std::vector<uint32_t>& top_cells,
        const NeighborGraph& graph,
        uint32_t w2) {
    size_t total = top_cells.size() * graph.n;
    if (w2 > total) {
        throw std::runtime_error("second_level_rank: w2 exceeds w1*n");
    }
    struct Edge {
        float dist;
        uint32_t centroid_id;
        uint32_t edge_rank;
    };
    std::vector<Edge> edges;
    edges.reserve(total);
    for (uint32_t i : top_cells) {
        float a = workspace.centroid_sqdists[i];
        for (uint32_t j = 0; j < graph.n; j++) {
            float b = workspace.centroid_sqdists[graph.neighbor(i, j)];
            float c = graph.edge_len2(i, j);
            float lam = line_lambda_clamped(a, b, c);
            edges.push_back({line_sqdist(a, b, c, lam), i, j});
        }
    }
    auto cmp = [](const Edge& a, const Edge& b) {
        if (a.dist != b.dist) {
            return a.dist < b.dist;
        }
        if (a.centroid_id != b.centroid_id) {
            return a.centroid_id < b.centroid_id;
        }
        return a.edge_rank < b.edge_rank;
    };
    std::partial_sort(edges.begin(), edges.begin() + w2, edges.end(), cmp);
    std::vector<std::pair<uint32_t, uint32_t>> out(w2);
    for (uint32_t i = 0; i < w2; i++) {
        out[i] = {edges[i].centroid_id, edges[i].edge_rank};
    }
    return out;
}

void query_term5(const float* y, const PQCodebooks& pq, QueryWorkspace& workspace) {
    uint32_t dsub = pq.sub_dim();
    workspace.t5.resize((size_t)pq.m * PQCodebooks::ksub);
    for (uint32_t p = 0; p < pq.m; p++) {
        const float* slice = y + (size_t)p * dsub;
        float* dst = workspace.t5.data() + (size_t)p * PQCodebooks::ksub;
        for (uint32_t j = 0; j < PQCodebooks::ksub; j++) {
            dst[j] = dot(slice, pq.sub_centroid(p, j), dsub);
        }
    }
}

float adc_distance(
        const uint8_t* code,
        uint8_t lambda_byte,
        uint32_t centroid_id,
        uint32_t edge_rank,
        const QueryWorkspace& workspace,
        const InvertedIndex& index) {
    const NeighborGraph& graph = index.graph;
    uint32_t s = graph.neighbor(centroid_id, edge_rank);
    float lam = dequantize_lambda(lambda_byte, index.lambda_quant);
    // term1 via term6/term7/term8
    float d = line_sqdist(
            workspace.centroid_sqdists[centroid_id],
            workspace.centroid_sqdists[s],
            graph.edge_len2(centroid_id, edge_rank),
            lam);
    uint32_t m = index.m();
    const float* t2 = index.pq.sub_sq_norms.data();
    float sum2 = 0, sum3 = 0, sum4 = 0, sum5 = 0;
    for (uint32_t p = 0; p < m; p++) {
        uint8_t c = code[p];
        sum2 += t2[(size_t)p * PQCodebooks::ksub + c];
        sum3 += index.t3_row(centroid_id, p)[c];
        sum4 += index.t3_row(s, p)[c];
        sum5 += workspace.t5_row(p)[c];
    }
    return d + sum2 + 2.0f * (1.0f - lam) * sum3 + 2.0f * lam * sum4 -
            2.0f * sum5;
}

SearchResult select_topk(
        std::vector<std::pair<float, uint32_t>>& candidates,
        uint32_t top_k) {
    size_t keep = std::min((size_t)top_k, candidates.size());
    auto cmp = [](const std::pair<float, uint32_t>& a,
                  const std::pair<float, uint32_t>& b) {
        return a.first < b.first || (a.first == b.first && a.second < b.second);
    };
    std::partial_sort(
            candidates.begin(), candidates.begin() + keep, candidates.end(), cmp);
    SearchResult res;
    res.ids.resize(keep);
    res.dists.resize(keep);
    for (size_t i = 0; i < keep; i++) {
        res.dists[i] = candidates[i].first;
        res.ids[i] = candidates[i].second;
    }
    return res;
}

SearchResult search_query(
        const InvertedIndex& index,
        const float* y,
        const QueryParams& params,
        SearchStats* stats) {
    QueryWorkspace ws;
    std::vector<uint32_t> top_cells =
            first_level_scan(y, index.codebook, params.w1, ws);
    uint32_t w2 = params.w2(index.n());
    auto cells = second_level_rank(ws, top_cells, index.graph, w2);
    query_term5(y, index.pq, ws);
    std::vector<std::pair<float, uint32_t>> candidates;
    for (auto [i, j] : cells) {
        const PostingList& list = index.lists[index.cell(i, j)];
        for (size_t e = 0; e < list.size(); e++) {
            float d = adc_distance(
                    list.codes.data() + e * index.m(), list.lambdas[e], i, j,
                    ws, index);
            candidates.emplace_back(d, list.ids[e]);
        }
    }
    if (stats) {
        stats->scanned_candidates += candidates.size();
    }
    return select_topk(candidates, params.top_k);
}

std::vector<SearchResult> search_batch(
        const InvertedIndex& index,
        const VectorSet& queries,
        const QueryParams& params,
        SearchStats* stats) {
    if (queries.dim != index.dim()) {
        throw std::runtime_error("search_batch: dimension mismatch");
    }
    size_t nq = queries.count();
    std::vector<SearchResult> results(nq);
    std::atomic<uint64_t> scanned{0};
    parallel_for(nq, [&](size_t b, size_t e) {
        SearchStats local;
        for (size_t q = b; q < e; q++) {
            results[q] = search_query(index, queries.row(q), params, &local);
        }
        scanned.fetch_add(local.scanned_candidates);
    });
    if (stats) {
        stats->scanned_candidates += scanned.load();
    }
    return results;
}

} // namespace vlq
