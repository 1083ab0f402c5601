#include "vlq/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "vlq/dataset.hpp"

namespace vlq {

double recall_at(
        const std::vector<SearchResult>& results,
        const GroundTruth& gt,
        uint32_t k) {
    if (results.size() != gt.count()) {
        throw std::runtime_error("recall_at: result/ground-truth length mismatch");
    }
    if (results.empty()) {
        return 0.0;
    }
    size_t hits = 0;
    for (size_t q = 0; q < results.size(); q++) {
        uint32_t truth = gt.row(q)[0];
        const auto& ids = results[q].ids;
        size_t limit = std::min((size_t)k, ids.size());
        for (size_t i = 0; i < limit; i++) {
            if (ids[i] == truth) {
                hits++;
                break;
            }
        }
    }
    return (double)hits / (double)results.size();
}

RegionStats region_histogram(const InvertedIndex& index) {
    RegionStats stats;
    stats.total_regions = index.lists.size();
    for (const auto& list : index.lists) {
        size_t len = list.size();
        int bucket;
        if (len == 0) {
            bucket = 0;
        } else if (len <= 100) {
            bucket = 1;
        } else if (len <= 300) {
            bucket = 2;
        } else if (len <= 500) {
            bucket = 3;
        } else {
            bucket = 4;
        }
        stats.buckets[bucket]++;
    }
    return stats;
}

MemoryReport memory_report(
        uint64_t n_points,
        uint32_t dim,
        uint64_t k,
        uint32_t n_edges,
        uint32_t m) {
    MemoryReport r;
    r.ids_bytes = 4 * n_points;
    r.codes_bytes = (uint64_t)m * n_points;
    r.lambda_bytes = n_points;
    r.structure_bytes = 4 * k * ((uint64_t)dim + 2 * (uint64_t)n_edges + 256ULL * m);
    r.total_bytes = r.ids_bytes + r.codes_bytes + r.lambda_bytes + r.structure_bytes;
    return r;
}

namespace {

struct TimedRun {
    std::vector<SearchResult> results;
    double mean_s = 0;
    double median_s = 0;
    double mean_scanned = 0;
};

template <typename SearchFn>
TimedRun timed_search(const VectorSet& queries, SearchFn&& fn) {
    using clock = std::chrono::steady_clock;
    size_t nq = queries.count();
    TimedRun run;
    SearchStats stats;
    // Warm-up batch excluded from timing.
    fn(queries, nullptr);
    auto t0 = clock::now();
    run.results = fn(queries, &stats);
    auto t1 = clock::now();
    double total = std::chrono::duration<double>(t1 - t0).count();
    run.mean_s = nq == 0 ? 0 : total / (double)nq;
    run.mean_scanned =
            nq == 0 ? 0 : (double)stats.scanned_candidates / (double)nq;
    // Median from a sequential single-query pass.
    std::vector<double> per_query(nq);
    VectorSet one(queries.dim, 1);
    for (size_t q = 0; q < nq; q++) {
        std::copy_n(queries.row(q), queries.dim, one.row(0));
        auto s0 = clock::now();
        fn(one, nullptr);
        auto s1 = clock::now();
        per_query[q] = std::chrono::duration<double>(s1 - s0).count();
    }
    if (nq > 0) {
        std::nth_element(
                per_query.begin(), per_query.begin() + nq / 2, per_query.end());
        run.median_s = per_query[nq / 2];
    }
    return run;
}

} // namespace

ExperimentReport run_experiment(
        const ExperimentConfig& config,
        const VectorSet& train,
        const VectorSet& base,
        const VectorSet& queries,
        const GroundTruth& gt) {
    if (config.w1_sweep.empty() || config.alpha_sweep.empty()) {
        throw std::runtime_error("run_experiment: empty parameter grid");
    }
    if (gt.count() != queries.count()) {
        throw std::runtime_error("run_experiment: ground truth/query mismatch");
    }
    Codebook cb = train_kmeans(train, config.k, config.iters, config.seed);
    NeighborGraph graph = build_nn_graph(cb, config.n);

    // PQ trains on anchor displacements of the training set.
    size_t nt = train.count();
    VectorSet disp(train.dim, nt);
    for (size_t i = 0; i < nt; i++) {
        const float* x = train.row(i);
        auto [c, cd] = assign_nearest(x, cb);
        EdgeAssignment ea = assign_edge(x, c, cb, graph, config.clamp_lambda);
        const float* ci = cb.centroid(c);
        const float* sj = cb.centroid(graph.neighbor(c, ea.edge_rank));
        for (uint32_t d = 0; d < train.dim; d++) {
            disp.row(i)[d] =
                    x[d] - ((1.0f - ea.lambda) * ci[d] + ea.lambda * sj[d]);
        }
    }
    PQCodebooks pq = train_pq(disp, config.m, config.iters, config.seed + 1);

    LambdaQuant q{0.0f, 1.0f};
    if (!config.clamp_lambda) {
        q = observe_lambda_range(base, cb, graph);
    }
    InvertedIndex index =
            build_index(base, cb, graph, pq, q, config.clamp_lambda);

    ExperimentReport report;
    report.k = config.k;
    report.n = config.n;
    report.m = config.m;
    for (uint32_t w1 : config.w1_sweep) {
        for (float alpha : config.alpha_sweep) {
            QueryParams params{w1, alpha, 100};
            TimedRun run = timed_search(
                    queries, [&](const VectorSet& qs, SearchStats* stats) {
                        return search_batch(index, qs, params, stats);
                    });
            ExperimentRow row;
            row.system = "vlq-adc";
            row.w1 = w1;
            row.alpha = alpha;
            row.recall1 = recall_at(run.results, gt, 1);
            row.recall10 = recall_at(run.results, gt, 10);
            row.recall100 = recall_at(run.results, gt, 100);
            row.mean_query_s = run.mean_s;
            row.median_query_s = run.median_s;
            row.mean_scanned = run.mean_scanned;
            report.rows.push_back(row);
        }
    }
    if (config.include_baseline) {
        IvfBaselineIndex baseline = build_ivf_baseline(base, cb, pq);
        for (uint32_t w1 : config.w1_sweep) {
            TimedRun run = timed_search(
                    queries, [&](const VectorSet& qs, SearchStats* stats) {
                        return search_ivf_baseline(baseline, qs, w1, 100, stats);
                    });
            ExperimentRow row;
            row.system = "ivfadc";
            row.w1 = w1;
            row.alpha = 1.0f;
            row.recall1 = recall_at(run.results, gt, 1);
            row.recall10 = recall_at(run.results, gt, 10);
            row.recall100 = recall_at(run.results, gt, 100);
            row.mean_query_s = run.mean_s;
            row.median_query_s = run.median_s;
            row.mean_scanned = run.mean_scanned;
            report.rows.push_back(row);
        }
    }
    if (!config.report_prefix.empty()) {
        write_report_files(report, config.report_prefix);
    }
    return report;
}

void write_report_files(
        const ExperimentReport& report,
        const std::string& prefix) {
    {
        std::ofstream csv(prefix + ".csv", std::ios::trunc);
        if (!csv) {
            throw std::runtime_error("write_report_files: cannot open " + prefix + ".csv");
        }
        csv << "system,k,n,m,w1,alpha,recall@1,recall@10,recall@100,"
               "mean_query_s,median_query_s,mean_scanned\n";
        for (const auto& r : report.rows) {
            char line[256];
            snprintf(line, sizeof line,
                     "%s,%u,%u,%u,%u,%.4f,%.4f,%.4f,%.4f,%.6g,%.6g,%.1f\n",
                     r.system.c_str(), report.k, report.n, report.m, r.w1,
                     r.alpha, r.recall1, r.recall10, r.recall100,
                     r.mean_query_s, r.median_query_s, r.mean_scanned);
            csv << line;
        }
    }
    {
        std::ofstream txt(prefix + ".txt", std::ios::trunc);
        if (!txt) {
            throw std::runtime_error("write_report_files: cannot open " + prefix + ".txt");
        }
        char line[256];
        snprintf(line, sizeof line, "k=%u n=%u m=%u\n", report.k, report.n,
                 report.m);
        txt << line;
        txt << "system     w1   alpha   R@1     R@10    R@100   "
               "mean(ms)  scanned\n";
        for (const auto& r : report.rows) {
            snprintf(line, sizeof line,
                     "%-10s %-4u %-7.3f %-7.4f %-7.4f %-7.4f %-9.4f %.1f\n",
                     r.system.c_str(), r.w1, r.alpha, r.recall1, r.recall10,
                     r.recall100, r.mean_query_s * 1e3, r.mean_scanned);
            txt << line;
        }
    }
}

} // namespace vlq
