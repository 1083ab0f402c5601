// Acceptance suite: one pass/fail line per criterion, exit 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "vlq/dataset.hpp"
#include "vlq/eval.hpp"
#include "vlq/index.hpp"
#include "vlq/ivf_baseline.hpp"
#include "vlq/line_quant.hpp"
#include "vlq/parallel.hpp"
#include "vlq/search.hpp"

using namespace vlq;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, const char* what, bool ok) {
    std::printf("%s  criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what);
    if (!ok) {
        failures++;
    }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
}

// Direct evaluation: |y - anchor(lambda) - pq_decode(code)|^2 at the
// dequantized lambda of the stored entry.
float direct_adc(
        const float* y,
        const InvertedIndex& index,
        uint32_t centroid_id,
        uint32_t edge_rank,
        const uint8_t* code,
        uint8_t lambda_byte) {
    uint32_t d = index.dim();
    float lambda = dequantize_lambda(lambda_byte, index.lambda_quant);
    const float* ci = index.codebook.centroid(centroid_id);
    const float* sj =
            index.codebook.centroid(index.graph.neighbor(centroid_id, edge_rank));
    std::vector<float> rec(d);
    pq_decode(code, index.pq, rec.data());
    float acc = 0;
    for (uint32_t t = 0; t < d; t++) {
        float anchor = (1.0f - lambda) * ci[t] + lambda * sj[t];
        float diff = y[t] - anchor - rec[t];
        acc += diff * diff;
    }
    return acc;
}

struct Instance {
    VectorSet base;
    Codebook cb;
    NeighborGraph graph;
    PQCodebooks pq;
    InvertedIndex index;
    VectorSet queries;
};

Instance make_instance(
        size_t count,
        uint32_t dim,
        uint32_t clusters,
        uint32_t k,
        uint32_t n,
        uint32_t m,
        uint32_t iters,
        size_t train_count,
        size_t query_count,
        uint64_t seed,
        float spread = 0.05f) {
    Instance inst;
    inst.base = gen_synthetic(count, dim, clusters, spread, seed);
    VectorSet train = inst.base;
    if (train_count < count) {
        train = VectorSet(dim, train_count);
        std::copy_n(inst.base.data.begin(), train.data.size(),
                    train.data.begin());
    }
    inst.cb = train_kmeans(train, k, iters, seed + 1);
    inst.graph = build_nn_graph(inst.cb, n);
    // PQ trains on displacements from the anchors of the training points.
    VectorSet disp(dim, train.count());
    for (size_t i = 0; i < train.count(); i++) {
        EdgeAssignment ea = assign_edge(
                train.row(i), assign_nearest(train.row(i), inst.cb).first,
                inst.cb, inst.graph, true);
        const float* ci = inst.cb.centroid(ea.centroid_id);
        const float* sj = inst.cb.centroid(
                inst.graph.neighbor(ea.centroid_id, ea.edge_rank));
        for (uint32_t t = 0; t < dim; t++) {
            disp.row(i)[t] = train.row(i)[t] -
                    ((1.0f - ea.lambda) * ci[t] + ea.lambda * sj[t]);
        }
    }
    inst.pq = train_pq(disp, m, iters, seed + 2);
    inst.index = build_index(inst.base, inst.cb, inst.graph, inst.pq,
                             {0.0f, 1.0f}, true);
    inst.queries = gen_synthetic(query_count, dim, clusters, spread, seed + 3);
    return inst;
}

// Full ADC scan: every stored entry of every cell, through the same
// workspace tables the production path uses.
std::vector<std::pair<float, uint32_t>> full_adc_scan(
        const float* y,
        const InvertedIndex& index,
        QueryWorkspace& ws) {
    ws.centroid_sqdists.resize(index.k());
    for (uint32_t c = 0; c < index.k(); c++) {
        ws.centroid_sqdists[c] =
                sqdist(y, index.codebook.centroid(c), index.dim());
    }
    query_term5(y, index.pq, ws);
    std::vector<std::pair<float, uint32_t>> cand;
    for (uint32_t c = 0; c < index.k(); c++) {
        for (uint32_t r = 0; r < index.n(); r++) {
            const PostingList& list = index.lists[index.cell(c, r)];
            for (size_t e = 0; e < list.size(); e++) {
                cand.emplace_back(
                        adc_distance(
                                list.codes.data() + e * index.m(),
                                list.lambdas[e], c, r, ws, index),
                        list.ids[e]);
            }
        }
    }
    return cand;
}

void criterion_1_3_4_10(const Instance& inst) {
    auto t0 = std::chrono::steady_clock::now();
    const InvertedIndex& index = inst.index;

    // 1: table-decomposed ADC equals the direct evaluation for every
    // scanned candidate of 100 queries, relative 1e-4.
    bool adc_ok = true;
    QueryWorkspace ws;
    for (size_t q = 0; q < inst.queries.count() && adc_ok; q++) {
        const float* y = inst.queries.row(q);
        float ynorm = sqnorm(y, index.dim());
        ws.centroid_sqdists.resize(index.k());
        for (uint32_t c = 0; c < index.k(); c++) {
            ws.centroid_sqdists[c] =
                    sqdist(y, index.codebook.centroid(c), index.dim());
        }
        query_term5(y, index.pq, ws);
        for (uint32_t c = 0; c < index.k() && adc_ok; c++) {
            for (uint32_t r = 0; r < index.n() && adc_ok; r++) {
                const PostingList& list = index.lists[index.cell(c, r)];
                for (size_t e = 0; e < list.size(); e++) {
                    const uint8_t* code = list.codes.data() + e * index.m();
                    float got = adc_distance(
                            code, list.lambdas[e], c, r, ws, index);
                    float want = direct_adc(
                            y, index, c, r, code, list.lambdas[e]);
                    float scale = std::max(
                            {1e-3f, std::fabs(want), ynorm});
                    if (std::fabs(got - want) > 1e-4f * scale) {
                        adc_ok = false;
                        break;
                    }
                }
            }
        }
    }
    bool in_time = seconds_since(t0) < 30.0;
    report(1, "ADC decomposition matches direct evaluation (rel 1e-4, <30 s)",
           adc_ok && in_time);

    // 3: exhaustive mode (w1=k, alpha=1) equals an independent full scan.
    QueryParams exhaustive{index.k(), 1.0f, 10};
    bool exact_ok = true;
    for (size_t q = 0; q < inst.queries.count() && exact_ok; q++) {
        SearchResult got = search_query(index, inst.queries.row(q), exhaustive);
        auto cand = full_adc_scan(inst.queries.row(q), index, ws);
        SearchResult want = select_topk(cand, exhaustive.top_k);
        exact_ok = got.ids == want.ids && got.dists == want.dists;
    }
    report(3, "exhaustive search equals the brute-force ADC scan exactly",
           exact_ok);

    // 4: exact distances over the full candidate set recover the true
    // nearest neighbor for every query.
    auto t4 = std::chrono::steady_clock::now();
    GroundTruth gt = brute_force_gt(inst.base, inst.queries, 1);
    size_t hits = 0;
    for (size_t q = 0; q < inst.queries.count(); q++) {
        const float* y = inst.queries.row(q);
        std::vector<std::pair<float, uint32_t>> cand;
        for (const PostingList& list : index.lists) {
            for (uint32_t id : list.ids) {
                cand.emplace_back(
                        sqdist(y, inst.base.row(id), index.dim()), id);
            }
        }
        SearchResult top = select_topk(cand, 1);
        hits += top.ids[0] == gt.row(q)[0];
    }
    bool r4_time = seconds_since(t4) < 60.0;
    report(4, "exact-distance full traversal reaches R@1 = 1.0 (<60 s)",
           hits == inst.queries.count() && r4_time);

    // 10: serialization roundtrip and the designated corruption errors.
    std::string path = (fs::temp_directory_path() / "vlq_accept.idx").string();
    serialize_index(index, path);
    InvertedIndex loaded = deserialize_index(path);
    QueryParams params{16, 0.5f, 10};
    bool rt_ok = true;
    for (size_t q = 0; q < inst.queries.count(); q++) {
        SearchResult a = search_query(index, inst.queries.row(q), params);
        SearchResult b = search_query(loaded, inst.queries.row(q), params);
        rt_ok = rt_ok && a.ids == b.ids && a.dists == b.dists;
    }
    bool magic_err = false, trunc_err = false;
    {
        std::FILE* f = std::fopen(path.c_str(), "r+b");
        std::fwrite("XXXX", 1, 4, f);
        std::fclose(f);
        try {
            deserialize_index(path);
        } catch (const std::exception& e) {
            magic_err = std::string(e.what()).find("magic") != std::string::npos;
        }
    }
    serialize_index(index, path);
    fs::resize_file(path, fs::file_size(path) / 2);
    try {
        deserialize_index(path);
    } catch (const std::exception& e) {
        trunc_err = std::string(e.what()).find("truncated") != std::string::npos;
    }
    fs::remove(path);
    report(10, "serialization roundtrip + corruption errors",
           rt_ok && magic_err && trunc_err);
}

void criterion_2() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<float> unif(-2.0f, 2.0f);
    std::uniform_real_distribution<float> lam(-0.5f, 1.5f);
    bool identity_ok = true, optimum_ok = true;
    uint32_t d = 12;
    std::vector<float> x(d), ci(d), cj(d);
    for (int trial = 0; trial < 10000; trial++) {
        for (uint32_t t = 0; t < d; t++) {
            x[t] = unif(rng);
            ci[t] = unif(rng);
            cj[t] = unif(rng);
        }
        float a = sqdist(x.data(), ci.data(), d);
        float b = sqdist(x.data(), cj.data(), d);
        float c = sqdist(ci.data(), cj.data(), d);
        if (c <= 0) {
            continue;
        }
        float lambda = lam(rng);
        float got = line_sqdist(a, b, c, lambda);
        float want = 0;
        for (uint32_t t = 0; t < d; t++) {
            float p = (1.0f - lambda) * ci[t] + lambda * cj[t];
            want += (x[t] - p) * (x[t] - p);
        }
        float scale = std::max({1e-9f, std::fabs(got), std::fabs(want)});
        if (std::fabs(got - want) > 1e-5f * scale) {
            identity_ok = false;
        }
        float opt = line_lambda(a, b, c);
        double h = 1e-2;
        double slope = (line_sqdist(a, b, c, (float)(opt + h)) -
                        line_sqdist(a, b, c, (float)(opt - h))) /
                (2.0 * h);
        if (std::abs(slope) > 1e-3 * std::max({1.0f, a, b, c})) {
            optimum_ok = false;
        }
    }
    report(2, "line-quantization identity (rel 1e-5) and optimality of lambda",
           identity_ok && optimum_ok);
}

void criterion_5() {
    MemoryReport r = memory_report(1000000000ULL, 128, 1ULL << 16, 64, 8);
    double gb = (double)r.total_bytes / 1e9;
    bool total_ok = std::abs(gb - 13.55) / 13.55 < 0.01;
    bool graph_ok = (1ULL << 16) * 32 * 8 == 16ULL * 1024 * 1024;
    report(5, "memory accounting: 13.55 GB within 1%, 16 MiB graph overhead",
           total_ok && graph_ok);
}

void criterion_6(const InvertedIndex& index) {
    bool partition_ok = true;
    std::vector<bool> seen(index.base_count, false);
    uint64_t total = 0;
    for (const PostingList& list : index.lists) {
        for (uint32_t id : list.ids) {
            if (id >= index.base_count || seen[id]) {
                partition_ok = false;
            } else {
                seen[id] = true;
            }
        }
        total += list.size();
    }
    partition_ok = partition_ok && total == index.base_count;
    RegionStats stats = region_histogram(index);
    uint64_t bucket_sum = 0;
    for (uint64_t b : stats.buckets) {
        bucket_sum += b;
    }
    bool hist_ok = stats.total_regions == (uint64_t)index.k() * index.n() &&
            bucket_sum == stats.total_regions;
    report(6, "posting lists partition [0,N); histogram invariants hold",
           partition_ok && hist_ok);
}

void criterion_7_8(const Instance& inst) {
    auto t0 = std::chrono::steady_clock::now();
    const InvertedIndex& index = inst.index;
    GroundTruth gt = brute_force_gt(inst.base, inst.queries, 10);

    bool recall_ok = true;
    double prev = -1.0;
    for (uint32_t w1 : {8u, 16u, 32u, 64u}) {
        QueryParams params{w1, 1.0f, 10};
        auto results = search_batch(index, inst.queries, params);
        double r10 = recall_at(results, gt, 10);
        if (r10 < prev) {
            recall_ok = false;
        }
        std::printf("  [7] w1=%u recall@10=%.4f\n", w1, r10);
        prev = r10;
    }

    bool scan_ok = true;
    uint64_t prev_scanned = 0;
    for (float alpha : {0.25f, 0.4f, 0.5f}) {
        SearchStats stats;
        QueryParams params{64, alpha, 10};
        search_batch(index, inst.queries, params, &stats);
        if (stats.scanned_candidates <= prev_scanned && prev_scanned != 0) {
            scan_ok = false;
        }
        std::printf("  [7] alpha=%.2f scanned=%llu\n", alpha,
                    (unsigned long long)stats.scanned_candidates);
        prev_scanned = stats.scanned_candidates;
    }
    bool in_time = seconds_since(t0) < 600.0;
    report(7, "recall@10 non-decreasing in w1; scan count increasing in alpha",
           recall_ok && scan_ok && in_time);

    // 8: anchors approximate the base set at least as well as the
    // first-level centroids alone.
    size_t count = inst.base.count();
    std::vector<double> anchor_err(count), centroid_err(count);
    // pure per-point work; accumulate sequentially afterwards
    parallel_for(count, [&](size_t begin, size_t end) {
        std::vector<float> dists(index.k());
        for (size_t i = begin; i < end; i++) {
            const float* x = inst.base.row(i);
            uint32_t best = 0;
            for (uint32_t cc = 0; cc < index.k(); cc++) {
                dists[cc] = sqdist(x, index.codebook.centroid(cc), index.dim());
                if (dists[cc] < dists[best]) {
                    best = cc;
                }
            }
            EdgeAssignment ea = assign_edge(dists.data(), best, index.graph, true);
            centroid_err[i] = dists[best];
            anchor_err[i] = ea.sq_dist;
        }
    });
    double mean_anchor = 0, mean_centroid = 0;
    for (size_t i = 0; i < count; i++) {
        mean_anchor += anchor_err[i];
        mean_centroid += centroid_err[i];
    }
    mean_anchor /= (double)count;
    mean_centroid /= (double)count;
    report(8, "mean anchor error <= mean centroid error",
           mean_anchor <= mean_centroid + 1e-9);
}

void criterion_9() {
    std::mt19937_64 rng(123);
    LambdaQuant q{-0.3f, 1.4f};
    std::uniform_real_distribution<float> unif(q.lo, q.hi);
    float bound = (q.hi - q.lo) / 512.0f + 1e-9f;
    bool ok = true;
    for (int trial = 0; trial < 10000; trial++) {
        float lambda = unif(rng);
        float back = dequantize_lambda(quantize_lambda(lambda, q), q);
        if (std::fabs(back - lambda) > bound) {
            ok = false;
        }
    }
    report(9, "lambda roundtrip error <= (hi-lo)/512", ok);
}

void criterion_11(const Instance& inst) {
    IvfBaselineIndex baseline =
            build_ivf_baseline(inst.base, inst.cb, inst.pq);
    auto results = search_ivf_baseline(
            baseline, inst.queries, (uint32_t)inst.cb.k(), 10);
    uint32_t m = inst.pq.m;
    uint32_t dsub = inst.pq.sub_dim();
    bool exact_ok = true;
    std::vector<float> residual(inst.base.dim);
    std::vector<float> lut((size_t)m * 256);
    for (size_t q = 0; q < inst.queries.count() && exact_ok; q++) {
        std::vector<std::pair<float, uint32_t>> cand;
        for (size_t c = 0; c < baseline.ids.size(); c++) {
            const float* ctr = inst.cb.centroid(c);
            for (uint32_t t = 0; t < inst.base.dim; t++) {
                residual[t] = inst.queries.row(q)[t] - ctr[t];
            }
            for (uint32_t p = 0; p < m; p++) {
                for (uint32_t j = 0; j < 256; j++) {
                    lut[(size_t)p * 256 + j] = sqdist(
                            residual.data() + p * dsub,
                            inst.pq.sub_centroid(p, j), dsub);
                }
            }
            for (size_t e = 0; e < baseline.ids[c].size(); e++) {
                float d = 0;
                for (uint32_t p = 0; p < m; p++) {
                    d += lut[(size_t)p * 256 + baseline.codes[c][e * m + p]];
                }
                cand.emplace_back(d, baseline.ids[c][e]);
            }
        }
        SearchResult want = select_topk(cand, 10);
        exact_ok = results[q].ids == want.ids && results[q].dists == want.dists;
    }

    // The report carries both systems' recall columns for shared codebooks.
    ExperimentConfig config;
    config.k = 32;
    config.n = 8;
    config.m = 4;
    config.iters = 5;
    config.seed = 11;
    config.w1_sweep = {8};
    config.alpha_sweep = {0.5f};
    config.report_prefix =
            (fs::temp_directory_path() / "vlq_accept_report").string();
    VectorSet base = gen_synthetic(5000, 16, 20, 0.05f, 70);
    VectorSet queries = gen_synthetic(50, 16, 20, 0.05f, 71);
    GroundTruth gt = brute_force_gt(base, queries, 100);
    ExperimentReport rep = run_experiment(config, base, base, queries, gt);
    bool systems_ok = rep.rows.size() == 2 &&
            rep.rows[0].system == "vlq-adc" && rep.rows[1].system == "ivfadc";
    bool header_ok = false;
    {
        std::ifstream csv(config.report_prefix + ".csv");
        std::string line;
        std::getline(csv, line);
        header_ok = line.find("recall@1") != std::string::npos &&
                line.find("recall@10") != std::string::npos &&
                line.find("recall@100") != std::string::npos;
    }
    fs::remove(config.report_prefix + ".csv");
    fs::remove(config.report_prefix + ".txt");
    report(11, "IVFADC baseline exhaustive-exact; report covers both systems",
           exact_ok && systems_ok && header_ok);
}

} // namespace

int main() {
    Instance small = make_instance(
            20000, 16, 40, 64, 8, 4, 8, 20000, 100, 1000);
    criterion_1_3_4_10(small);
    criterion_2();
    criterion_5();
    Instance big = make_instance(
            1000000, 32, 200, 1024, 16, 8, 6, 100000, 500, 2000, 0.25f);
    criterion_6(big.index);
    criterion_7_8(big);
    criterion_9();
    criterion_11(small);
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
