#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "vlq/dataset.hpp"
#include "vlq/eval.hpp"

using namespace vlq;
namespace fs = std::filesystem;

namespace {

struct EvalFixture {
    VectorSet base;
    Codebook cb;
    NeighborGraph graph;
    PQCodebooks pq;
    InvertedIndex index;

    EvalFixture() {
        base = gen_synthetic(4000, 8, 12, 0.05f, 60);
        cb = train_kmeans(base, 16, 8, 1);
        graph = build_nn_graph(cb, 4);
        pq = train_pq(base, 4, 5, 2);
        index = build_index(base, cb, graph, pq, {0.0f, 1.0f}, true);
    }
};

} // namespace

TEST_CASE("recall_at against a naive membership check") {
    GroundTruth gt;
    gt.k_per_query = 2;
    gt.ids = {5, 1, 7, 2, 9, 3};
    std::vector<SearchResult> results(3);
    results[0].ids = {5, 0, 1};   // true NN first
    results[1].ids = {0, 7, 2};   // true NN second
    results[2].ids = {1, 2, 3};   // true NN absent
    CHECK(recall_at(results, gt, 1) == doctest::Approx(1.0 / 3));
    CHECK(recall_at(results, gt, 2) == doctest::Approx(2.0 / 3));
    CHECK(recall_at(results, gt, 3) == doctest::Approx(2.0 / 3));
    // Perfect results hit 1.0 at every K.
    std::vector<SearchResult> perfect(3);
    perfect[0].ids = {5};
    perfect[1].ids = {7};
    perfect[2].ids = {9};
    CHECK(recall_at(perfect, gt, 1) == 1.0);
    CHECK(recall_at(perfect, gt, 100) == 1.0);
    GroundTruth wrong = gt;
    wrong.ids.resize(4);
    CHECK_THROWS(recall_at(results, wrong, 1));
}

TEST_CASE("region_histogram") {
    SUBCASE("hand-built lists land one per bucket") {
        EvalFixture f;
        InvertedIndex index = f.index;
        for (auto& list : index.lists) {
            list.ids.clear();
            list.codes.clear();
            list.lambdas.clear();
        }
        size_t lens[5] = {0, 50, 200, 400, 600};
        uint32_t next = 0;
        for (int b = 0; b < 5; b++) {
            auto& list = index.lists[b];
            for (size_t e = 0; e < lens[b]; e++) {
                list.ids.push_back(next++);
                list.lambdas.push_back(0);
                for (uint32_t p = 0; p < index.m(); p++) {
                    list.codes.push_back(0);
                }
            }
        }
        index.base_count = next;
        RegionStats stats = region_histogram(index);
        // every remaining cell is empty
        CHECK(stats.buckets[0] == stats.total_regions - 4);
        CHECK(stats.buckets[1] == 1);
        CHECK(stats.buckets[2] == 1);
        CHECK(stats.buckets[3] == 1);
        CHECK(stats.buckets[4] == 1);
    }
    SUBCASE("buckets sum to k*n and occupancies sum to N") {
        EvalFixture f;
        RegionStats stats = region_histogram(f.index);
        CHECK(stats.total_regions == (uint64_t)f.graph.k * f.graph.n);
        uint64_t bucket_sum = 0;
        for (uint64_t b : stats.buckets) {
            bucket_sum += b;
        }
        CHECK(bucket_sum == stats.total_regions);
        uint64_t weighted = 0;
        for (const auto& list : f.index.lists) {
            weighted += list.size();
        }
        CHECK(weighted == f.index.base_count);
    }
}

TEST_CASE("memory_report closed-form accounting at billion scale") {
    // 10^9 points, D=128, k=2^16, n=64, m=8 -> ~13.55 GB total.
    MemoryReport r = memory_report(1000000000ULL, 128, 1ULL << 16, 64, 8);
    CHECK(r.ids_bytes == 4000000000ULL);
    CHECK(r.codes_bytes == 8000000000ULL);
    CHECK(r.lambda_bytes == 1000000000ULL);
    CHECK(r.total_bytes == r.ids_bytes + r.codes_bytes + r.lambda_bytes +
                  r.structure_bytes);
    double total_gb = (double)r.total_bytes / 1e9;
    CHECK(std::abs(total_gb - 13.55) / 13.55 < 0.01);
    // Graph-only overhead at k=2^16, n=32, 8 bytes per edge: 16 MiB.
    uint64_t graph_bytes = (1ULL << 16) * 32 * 8;
    CHECK(graph_bytes == 16ULL * 1024 * 1024);
    // N=0 leaves only the structure bytes.
    MemoryReport empty = memory_report(0, 128, 1ULL << 16, 64, 8);
    CHECK(empty.total_bytes == empty.structure_bytes);
}

TEST_CASE("ivf baseline build") {
    EvalFixture f;
    IvfBaselineIndex baseline = build_ivf_baseline(f.base, f.cb, f.pq);
    SUBCASE("lists partition the base set") {
        size_t total = 0;
        std::vector<bool> seen(f.base.count(), false);
        for (const auto& ids : baseline.ids) {
            for (uint32_t id : ids) {
                CHECK(!seen[id]);
                seen[id] = true;
            }
            total += ids.size();
        }
        CHECK(total == f.base.count());
    }
    SUBCASE("per-point replay matches the single-point operations") {
        std::vector<float> r(f.base.dim);
        std::vector<uint8_t> code(f.pq.m);
        for (size_t i = 0; i < f.base.count(); i += 7) {
            uint32_t c = assign_nearest(f.base.row(i), f.cb).first;
            const float* ctr = f.cb.centroid(c);
            for (uint32_t d = 0; d < f.base.dim; d++) {
                r[d] = f.base.row(i)[d] - ctr[d];
            }
            pq_encode(r.data(), f.pq, code.data());
            bool found = false;
            for (size_t e = 0; e < baseline.ids[c].size(); e++) {
                if (baseline.ids[c][e] == i) {
                    found = true;
                    CHECK(std::equal(
                            code.begin(), code.end(),
                            baseline.codes[c].begin() + e * f.pq.m));
                }
            }
            CHECK(found);
        }
    }
    SUBCASE("base equal to the centroids gives near-zero residual codes") {
        VectorSet centroids(f.cb.dim, f.cb.k());
        centroids.data = f.cb.centroids;
        IvfBaselineIndex bl = build_ivf_baseline(centroids, f.cb, f.pq);
        // every residual is the zero vector; codes must all agree with the
        // direct encoding of zero
        std::vector<float> zero(f.cb.dim, 0.0f);
        std::vector<uint8_t> zcode(f.pq.m);
        pq_encode(zero.data(), f.pq, zcode.data());
        for (size_t c = 0; c < bl.ids.size(); c++) {
            for (size_t e = 0; e < bl.ids[c].size(); e++) {
                CHECK(std::equal(zcode.begin(), zcode.end(),
                                 bl.codes[c].begin() + e * f.pq.m));
            }
        }
    }
}

TEST_CASE("ivf baseline search") {
    EvalFixture f;
    IvfBaselineIndex baseline = build_ivf_baseline(f.base, f.cb, f.pq);
    VectorSet qs = gen_synthetic(10, 8, 12, 0.05f, 61);
    SUBCASE("w=k is exhaustive-ADC-exact") {
        auto results = search_ivf_baseline(baseline, qs, (uint32_t)f.cb.k(), 10);
        uint32_t m = f.pq.m;
        uint32_t dsub = f.pq.sub_dim();
        for (size_t q = 0; q < qs.count(); q++) {
            std::vector<std::pair<float, uint32_t>> cand;
            std::vector<float> residual(f.base.dim);
            std::vector<float> lut((size_t)m * 256);
            for (size_t c = 0; c < baseline.ids.size(); c++) {
                const float* ctr = f.cb.centroid(c);
                for (uint32_t d = 0; d < f.base.dim; d++) {
                    residual[d] = qs.row(q)[d] - ctr[d];
                }
                for (uint32_t p = 0; p < m; p++) {
                    for (uint32_t j = 0; j < 256; j++) {
                        lut[(size_t)p * 256 + j] = sqdist(
                                residual.data() + p * dsub,
                                f.pq.sub_centroid(p, j), dsub);
                    }
                }
                for (size_t e = 0; e < baseline.ids[c].size(); e++) {
                    float d = 0;
                    for (uint32_t p = 0; p < m; p++) {
                        d += lut[(size_t)p * 256 +
                                 baseline.codes[c][e * m + p]];
                    }
                    cand.emplace_back(d, baseline.ids[c][e]);
                }
            }
            SearchResult oracle = select_topk(cand, 10);
            CHECK(results[q].ids == oracle.ids);
            CHECK(results[q].dists == oracle.dists);
        }
    }
    SUBCASE("deterministic across repeated runs") {
        auto a = search_ivf_baseline(baseline, qs, 8, 10);
        auto b = search_ivf_baseline(baseline, qs, 8, 10);
        for (size_t q = 0; q < qs.count(); q++) {
            CHECK(a[q].ids == b[q].ids);
        }
    }
    SUBCASE("vlq with alpha<1 scans strictly fewer candidates") {
        // all visited cells are nonempty on this dense fixture for w1=2
        SearchStats vlq_stats, base_stats;
        QueryParams params{2, 0.5f, 10};
        search_batch(f.index, qs, params, &vlq_stats);
        search_ivf_baseline(baseline, qs, 2, 10, &base_stats);
        CHECK(vlq_stats.scanned_candidates < base_stats.scanned_candidates);
    }
}

TEST_CASE("run_experiment") {
    VectorSet base = gen_synthetic(5000, 8, 12, 0.05f, 62);
    VectorSet queries = gen_synthetic(40, 8, 12, 0.05f, 63);
    GroundTruth gt = brute_force_gt(base, queries, 100);
    ExperimentConfig config;
    config.k = 16;
    config.n = 4;
    config.m = 4;
    config.iters = 6;
    config.seed = 7;
    config.report_prefix =
            (fs::temp_directory_path() / "vlq_test_report").string();
    SUBCASE("single grid cell yields one row per system") {
        config.w1_sweep = {8};
        config.alpha_sweep = {0.5f};
        ExperimentReport report =
                run_experiment(config, base, base, queries, gt);
        REQUIRE(report.rows.size() == 2);
        CHECK(report.rows[0].system == "vlq-adc");
        CHECK(report.rows[1].system == "ivfadc");
        CHECK(fs::exists(config.report_prefix + ".csv"));
        CHECK(fs::exists(config.report_prefix + ".txt"));
        // csv header + one row per system
        std::ifstream csv(config.report_prefix + ".csv");
        std::string line;
        int lines = 0;
        while (std::getline(csv, line)) {
            lines++;
        }
        CHECK(lines == 3);
    }
    SUBCASE("w1 sweep recall is non-decreasing; alpha sweep scan grows") {
        config.include_baseline = false;
        config.w1_sweep = {2, 4, 8, 16};
        config.alpha_sweep = {1.0f};
        ExperimentReport r1 = run_experiment(config, base, base, queries, gt);
        for (size_t i = 1; i < r1.rows.size(); i++) {
            CHECK(r1.rows[i].recall10 >= r1.rows[i - 1].recall10);
        }
        config.w1_sweep = {8};
        config.alpha_sweep = {0.25f, 0.5f, 0.75f};
        ExperimentReport r2 = run_experiment(config, base, base, queries, gt);
        for (size_t i = 1; i < r2.rows.size(); i++) {
            CHECK(r2.rows[i].mean_scanned > r2.rows[i - 1].mean_scanned);
        }
    }
    fs::remove(config.report_prefix + ".csv");
    fs::remove(config.report_prefix + ".txt");
}
