#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlq/dataset.hpp"
#include "vlq/eval.hpp"
#include "vlq/index.hpp"
#include "vlq/parallel.hpp"
#include "vlq/search.hpp"
#include "vlq/vecs_io.hpp"

namespace {

using namespace vlq;

// Trained quantizers travel as an index file with zero points.
InvertedIndex make_model(
        const Codebook& cb,
        const NeighborGraph& graph,
        const PQCodebooks& pq,
        bool clamp) {
    InvertedIndex model;
    model.codebook = cb;
    model.graph = graph;
    model.pq = pq;
    model.clamp_lambda = clamp;
    model.base_count = 0;
    model.lists.resize((size_t)graph.k * graph.n);
    model.t3 = compute_t3(cb, pq);
    return model;
}

int run(int argc, char** argv) {
    CLI::App app{"VLQ-ADC: two-level vector/line-quantization ANN search"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker thread cap (0 = all cores)")
            ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "Generate synthetic Gaussian-mixture data");
    size_t synth_n = 100000;
    uint32_t synth_d = 32, synth_clusters = 200;
    float synth_spread = 0.05f;
    uint64_t synth_seed = 42;
    std::string synth_out;
    synth->add_option("--n", synth_n, "Number of vectors")->capture_default_str();
    synth->add_option("--d", synth_d, "Dimension")->capture_default_str();
    synth->add_option("--clusters", synth_clusters, "Number of clusters")
            ->capture_default_str();
    synth->add_option("--spread", synth_spread, "Cluster stddev")->capture_default_str();
    synth->add_option("--seed", synth_seed, "RNG seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output .fvecs/.bvecs path")->required();

    // gt
    auto* gt_cmd = app.add_subcommand("gt", "Compute exact ground truth (brute force)");
    std::string gt_base, gt_queries, gt_out;
    uint32_t gt_k = 100;
    gt_cmd->add_option("--base", gt_base, "Base vectors file")->required();
    gt_cmd->add_option("--queries", gt_queries, "Query vectors file")->required();
    gt_cmd->add_option("--k", gt_k, "Neighbors stored per query")->capture_default_str();
    gt_cmd->add_option("--out", gt_out, "Output .ivecs path")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train codebook, graph and PQ");
    std::string train_in, train_out;
    uint32_t train_k = 1024, train_n = 16, train_m = 8, train_iters = 10;
    uint64_t train_seed = 42;
    bool train_clamp = true;
    train_cmd->add_option("--train", train_in, "Training vectors file")->required();
    train_cmd->add_option("--k", train_k, "First-level centroids")->capture_default_str();
    train_cmd->add_option("--n", train_n, "Edges per centroid")->capture_default_str();
    train_cmd->add_option("--m", train_m, "PQ code bytes")->capture_default_str();
    train_cmd->add_option("--iters", train_iters, "k-means iterations")
            ->capture_default_str();
    train_cmd->add_option("--seed", train_seed, "RNG seed")->capture_default_str();
    train_cmd->add_flag("--clamp-lambda,!--no-clamp-lambda", train_clamp,
                        "Clamp lambda to [0,1]")
            ->capture_default_str();
    train_cmd->add_option("--out", train_out, "Output model path")->required();

    // build
    auto* build_cmd = app.add_subcommand("build", "Build the inverted index");
    std::string build_base, build_model, build_out;
    size_t build_batch = 100000;
    bool build_no_t3 = false;
    build_cmd->add_option("--base", build_base, "Base vectors file")->required();
    build_cmd->add_option("--model", build_model, "Trained model path")->required();
    build_cmd->add_option("--batch", build_batch, "Points per batch")
            ->capture_default_str();
    build_cmd->add_flag("--omit-t3", build_no_t3,
                        "Skip the t3 table in the file (recomputed on load)");
    build_cmd->add_option("--out", build_out, "Output index path")->required();

    // query
    auto* query_cmd = app.add_subcommand("query", "Search an index");
    std::string query_index, query_file, query_out;
    uint32_t query_w1 = 64, query_k = 10;
    float query_alpha = 0.25f;
    query_cmd->add_option("--index", query_index, "Index path")->required();
    query_cmd->add_option("--queries", query_file, "Query vectors file")->required();
    query_cmd->add_option("--w1", query_w1, "First-level regions to visit")
            ->capture_default_str();
    query_cmd->add_option("--alpha", query_alpha, "Second-level fraction kept")
            ->capture_default_str();
    query_cmd->add_option("--k", query_k, "Results per query")->capture_default_str();
    query_cmd->add_option("--out", query_out, "Optional .ivecs output of result ids");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Run the evaluation protocol");
    std::string eval_train, eval_base, eval_queries, eval_gt, eval_report = "report";
    uint32_t eval_k = 1024, eval_n = 16, eval_m = 8, eval_iters = 10;
    uint64_t eval_seed = 42;
    bool eval_clamp = true, eval_no_baseline = false;
    std::vector<uint32_t> eval_w1{64};
    std::vector<float> eval_alpha{0.25f};
    eval_cmd->add_option("--train", eval_train,
                         "Training vectors file (default: base vectors)");
    eval_cmd->add_option("--base", eval_base, "Base vectors file")->required();
    eval_cmd->add_option("--queries", eval_queries, "Query vectors file")->required();
    eval_cmd->add_option("--gt", eval_gt, "Ground-truth .ivecs file")->required();
    eval_cmd->add_option("--k", eval_k, "First-level centroids")->capture_default_str();
    eval_cmd->add_option("--n", eval_n, "Edges per centroid")->capture_default_str();
    eval_cmd->add_option("--m", eval_m, "PQ code bytes")->capture_default_str();
    eval_cmd->add_option("--iters", eval_iters, "k-means iterations")
            ->capture_default_str();
    eval_cmd->add_option("--seed", eval_seed, "RNG seed")->capture_default_str();
    eval_cmd->add_flag("--clamp-lambda,!--no-clamp-lambda", eval_clamp,
                       "Clamp lambda to [0,1]")
            ->capture_default_str();
    eval_cmd->add_option("--w1", eval_w1, "w1 sweep values")->capture_default_str();
    eval_cmd->add_option("--alpha", eval_alpha, "alpha sweep values")
            ->capture_default_str();
    eval_cmd->add_flag("--no-baseline", eval_no_baseline, "Skip the IVFADC baseline");
    eval_cmd->add_option("--report", eval_report, "Report file prefix")
            ->capture_default_str();

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Index diagnostics");
    std::string stats_index;
    stats_cmd->add_option("--index", stats_index, "Index path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    set_max_threads(threads);

    if (*synth) {
        VectorSet set = gen_synthetic(
                synth_n, synth_d, synth_clusters, synth_spread, synth_seed);
        write_vecs(set, synth_out, vecs_kind_from_path(synth_out));
        printf("wrote %zu vectors (d=%u) to %s\n", set.count(), set.dim,
               synth_out.c_str());
    } else if (*gt_cmd) {
        VectorSet base = read_vecs(gt_base, vecs_kind_from_path(gt_base));
        VectorSet queries = read_vecs(gt_queries, vecs_kind_from_path(gt_queries));
        GroundTruth gt = brute_force_gt(base, queries, gt_k);
        write_ground_truth(gt, gt_out);
        printf("wrote ground truth for %zu queries (k=%u) to %s\n", gt.count(),
               gt_k, gt_out.c_str());
    } else if (*train_cmd) {
        VectorSet train = read_vecs(train_in, vecs_kind_from_path(train_in));
        if (train.dim % train_m != 0) {
            fprintf(stderr, "error: --m (%u) must divide the dimension (%u)\n",
                    train_m, train.dim);
            return 1;
        }
        Codebook cb = train_kmeans(train, train_k, train_iters, train_seed);
        NeighborGraph graph = build_nn_graph(cb, train_n);
        size_t nt = train.count();
        VectorSet disp(train.dim, nt);
        for (size_t i = 0; i < nt; i++) {
            const float* x = train.row(i);
            uint32_t c = assign_nearest(x, cb).first;
            EdgeAssignment ea = assign_edge(x, c, cb, graph, train_clamp);
            const float* ci = cb.centroid(c);
            const float* sj = cb.centroid(graph.neighbor(c, ea.edge_rank));
            for (uint32_t d = 0; d < train.dim; d++) {
                disp.row(i)[d] =
                        x[d] - ((1.0f - ea.lambda) * ci[d] + ea.lambda * sj[d]);
            }
        }
        PQCodebooks pq = train_pq(disp, train_m, train_iters, train_seed + 1);
        serialize_index(make_model(cb, graph, pq, train_clamp), train_out);
        printf("trained k=%u n=%u m=%u on %zu vectors; model at %s\n", train_k,
               train_n, train_m, nt, train_out.c_str());
    } else if (*build_cmd) {
        VectorSet base = read_vecs(build_base, vecs_kind_from_path(build_base));
        InvertedIndex model = deserialize_index(build_model);
        LambdaQuant q{0.0f, 1.0f};
        if (!model.clamp_lambda) {
            q = observe_lambda_range(base, model.codebook, model.graph);
        }
        InvertedIndex index = build_index(
                base, model.codebook, model.graph, model.pq, q,
                model.clamp_lambda, build_batch);
        serialize_index(index, build_out, !build_no_t3);
        printf("indexed %zu vectors into %u cells; index at %s\n", base.count(),
               index.k() * index.n(), build_out.c_str());
    } else if (*query_cmd) {
        InvertedIndex index = deserialize_index(query_index);
        VectorSet queries = read_vecs(query_file, vecs_kind_from_path(query_file));
        QueryParams params{query_w1, query_alpha, query_k};
        std::vector<SearchResult> results = search_batch(index, queries, params);
        for (size_t q = 0; q < results.size(); q++) {
            printf("%zu:", q);
            for (size_t i = 0; i < results[q].ids.size(); i++) {
                printf(" %u:%g", results[q].ids[i], results[q].dists[i]);
            }
            printf("\n");
        }
        if (!query_out.empty()) {
            GroundTruth out;
            out.k_per_query = query_k;
            out.ids.assign((size_t)query_k * results.size(), 0);
            for (size_t q = 0; q < results.size(); q++) {
                for (size_t i = 0; i < results[q].ids.size(); i++) {
                    out.ids[q * query_k + i] = results[q].ids[i];
                }
            }
            write_ground_truth(out, query_out);
        }
    } else if (*eval_cmd) {
        VectorSet base = read_vecs(eval_base, vecs_kind_from_path(eval_base));
        VectorSet queries =
                read_vecs(eval_queries, vecs_kind_from_path(eval_queries));
        GroundTruth gt = read_ground_truth(eval_gt);
        VectorSet train = eval_train.empty()
                ? base
                : read_vecs(eval_train, vecs_kind_from_path(eval_train));
        if (base.dim % eval_m != 0) {
            fprintf(stderr, "error: --m (%u) must divide the dimension (%u)\n",
                    eval_m, base.dim);
            return 1;
        }
        ExperimentConfig config;
        config.k = eval_k;
        config.n = eval_n;
        config.m = eval_m;
        config.iters = eval_iters;
        config.seed = eval_seed;
        config.clamp_lambda = eval_clamp;
        config.w1_sweep = eval_w1;
        config.alpha_sweep = eval_alpha;
        config.include_baseline = !eval_no_baseline;
        config.report_prefix = eval_report;
        ExperimentReport report =
                run_experiment(config, train, base, queries, gt);
        for (const auto& r : report.rows) {
            printf("%-8s w1=%-3u alpha=%.3f R@1=%.4f R@10=%.4f R@100=%.4f "
                   "mean=%.4fms scanned=%.0f\n",
                   r.system.c_str(), r.w1, r.alpha, r.recall1, r.recall10,
                   r.recall100, r.mean_query_s * 1e3, r.mean_scanned);
        }
        printf("report written to %s.csv / %s.txt\n", eval_report.c_str(),
               eval_report.c_str());
    } else if (*stats_cmd) {
        InvertedIndex index = deserialize_index(stats_index);
        RegionStats rs = region_histogram(index);
        const char* labels[5] = {"0", "1-100", "101-300", "301-500", ">500"};
        printf("regions: %llu (k=%u, n=%u), points: %llu\n",
               (unsigned long long)rs.total_regions, index.k(), index.n(),
               (unsigned long long)index.base_count);
        for (int b = 0; b < 5; b++) {
            printf("  occupancy %-8s %10llu regions (%.2f%%)\n", labels[b],
                   (unsigned long long)rs.buckets[b],
                   100.0 * (double)rs.buckets[b] / (double)rs.total_regions);
        }
        MemoryReport mr = memory_report(
                index.base_count, index.dim(), index.k(), index.n(), index.m());
        printf("memory: ids=%llu codes=%llu lambda=%llu structure=%llu "
               "total=%llu bytes\n",
               (unsigned long long)mr.ids_bytes,
               (unsigned long long)mr.codes_bytes,
               (unsigned long long)mr.lambda_bytes,
               (unsigned long long)mr.structure_bytes,
               (unsigned long long)mr.total_bytes);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
