#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vlq/index.hpp"
#include "vlq/ivf_baseline.hpp"
#include "vlq/search.hpp"
#include "vlq/vecset.hpp"

namespace vlq {

// Fraction of queries whose true nearest neighbor (ground-truth column 0)
// appears among the first K returned ids.
double recall_at(
        const std::vector<SearchResult>& results,
        const GroundTruth& gt,
        uint32_t k);

// Occupancy buckets: 0, 1-100, 101-300, 301-500, >500.
struct RegionStats {
    std::array<uint64_t, 5> buckets{};
    uint64_t total_regions = 0;
};

RegionStats region_histogram(const InvertedIndex& index);

// Closed-form accounting: 4N id bytes, mN code bytes, N lambda bytes,
// 4k(D + 2n + 256m) structure bytes.
struct MemoryReport {
    uint64_t ids_bytes = 0;
    uint64_t codes_bytes = 0;
    uint64_t lambda_bytes = 0;
    uint64_t structure_bytes = 0;
    uint64_t total_bytes = 0;
};

MemoryReport memory_report(
        uint64_t n_points,
        uint32_t dim,
        uint64_t k,
        uint32_t n_edges,
        uint32_t m);

// One grid cell of the experiment sweep.
struct ExperimentRow {
    std::string system; // "vlq-adc" or "ivfadc"
    uint32_t w1 = 0;
    float alpha = 0;
    double recall1 = 0;
    double recall10 = 0;
    double recall100 = 0;
    double mean_query_s = 0;
    double median_query_s = 0;
    double mean_scanned = 0;
};

struct ExperimentConfig {
    uint32_t k = 1024;
    uint32_t n = 16;
    uint32_t m = 8;
    uint32_t iters = 10;
    uint64_t seed = 42;
    bool clamp_lambda = true;
    std::vector<uint32_t> w1_sweep{64};
    std::vector<float> alpha_sweep{0.25f};
    bool include_baseline = true;
    std::string report_prefix; // writes <prefix>.csv and <prefix>.txt
};

struct ExperimentReport {
    uint32_t k = 0, n = 0, m = 0;
    std::vector<ExperimentRow> rows;
};

// Trains, builds, and sweeps the parameter grid; writes a CSV and a plain
// text table when config.report_prefix is set.
ExperimentReport run_experiment(
        const ExperimentConfig& config,
        const VectorSet& train,
        const VectorSet& base,
        const VectorSet& queries,
        const GroundTruth& gt);

void write_report_files(
        const ExperimentReport& report,
        const std::string& prefix);

} // namespace vlq
