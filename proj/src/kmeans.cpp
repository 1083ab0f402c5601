#include "vlq/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "vlq/parallel.hpp"

namespace vlq {

void Codebook::refresh_sq_norms() {
    size_t kk = centroids.size() / dim;
    sq_norms.resize(kk);
    for (size_t i = 0; i < kk; i++) {
        sq_norms[i] = sqnorm(centroid(i), dim);
    }
}

std::pair<uint32_t, float> assign_nearest(const float* x, const Codebook& codebook) {
    size_t k = codebook.k();
    uint32_t best = 0;
    float best_d = std::numeric_limits<float>::max();
    for (size_t i = 0; i < k; i++) {
        float d = sqdist(x, codebook.centroid(i), codebook.dim);
        if (d < best_d) {
            best_d = d;
            best = (uint32_t)i;
        }
    }
    return {best, best_d};
}

double quantization_error(const VectorSet& set, const Codebook& codebook) {
    if (set.dim != codebook.dim) {
        throw std::runtime_error("quantization_error: dimension mismatch");
    }
    size_t n = set.count();
    std::vector<double> per_point(n);
    parallel_for(n, [&](size_t b, size_t e) {
        for (size_t i = b; i < e; i++) {
            per_point[i] = assign_nearest(set.row(i), codebook).second;
        }
    });
    double acc = 0;
    for (double d : per_point) {
        acc += d;
    }
    return acc;
}

// k-means++: D^2-weighted sequential sampling.
static std::vector<float> seed_centroids(
        const VectorSet& train,
        uint32_t k,
        std::mt19937_64& rng) {
    size_t n = train.count();
    uint32_t d = train.dim;
    std::vector<float> centroids((size_t)k * d);
    std::uniform_int_distribution<size_t> first(0, n - 1);
    size_t c0 = first(rng);
    std::copy_n(train.row(c0), d, centroids.data());

    std::vector<float> min_d(n);
    parallel_for(n, [&](size_t b, size_t e) {
        for (size_t i = b; i < e; i++) {
            min_d[i] = sqdist(train.row(i), centroids.data(), d);
        }
    });
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (uint32_t c = 1; c < k; c++) {
        double total = 0;
        for (size_t i = 0; i < n; i++) {
            total += min_d[i];
        }
        size_t chosen;
        if (total <= 0) {
            chosen = first(rng); // all points covered, pick any
        } else {
            double target = unif(rng) * total;
            double acc = 0;
            chosen = n - 1;
            for (size_t i = 0; i < n; i++) {
                acc += min_d[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        }
        float* dst = centroids.data() + (size_t)c * d;
        std::copy_n(train.row(chosen), d, dst);
        parallel_for(n, [&](size_t b, size_t e) {
            for (size_t i = b; i < e; i++) {
                float dist = sqdist(train.row(i), dst, d);
                min_d[i] = std::min(min_d[i], dist);
            }
        });
    }
    return centroids;
}

Codebook train_kmeans(
        const VectorSet& train,
        uint32_t k,
        uint32_t iters,
        uint64_t seed) {
    size_t n = train.count();
    uint32_t d = train.dim;
    if (k == 0 || n < k) {
        throw std::runtime_error("train_kmeans: need at least k training points");
    }
    if (iters == 0) {
        throw std::runtime_error("train_kmeans: iters must be >= 1");
    }
    std::mt19937_64 rng(seed);
    Codebook cb;
    cb.dim = d;
    cb.centroids = seed_centroids(train, k, rng);
    cb.refresh_sq_norms();

    std::vector<uint32_t> assign(n);
    std::vector<float> dist(n);
    for (uint32_t it = 0; it < iters; it++) {
        parallel_for(n, [&](size_t b, size_t e) {
            for (size_t i = b; i < e; i++) {
                auto [id, dd] = assign_nearest(train.row(i), cb);
                assign[i] = id;
                dist[i] = dd;
            }
        });
        // Sequential accumulation keeps the update independent of threads.
        std::vector<double> sums((size_t)k * d, 0.0);
        std::vector<size_t> counts(k, 0);
        std::vector<double> cluster_err(k, 0.0);
        for (size_t i = 0; i < n; i++) {
            uint32_t c = assign[i];
            counts[c]++;
            cluster_err[c] += dist[i];
            const float* x = train.row(i);
            double* s = sums.data() + (size_t)c * d;
            for (uint32_t j = 0; j < d; j++) {
                s[j] += x[j];
            }
        }
        for (uint32_t c = 0; c < k; c++) {
            if (counts[c] == 0) {
                continue;
            }
            float* dst = cb.centroids.data() + (size_t)c * d;
            const double* s = sums.data() + (size_t)c * d;
            for (uint32_t j = 0; j < d; j++) {
                dst[j] = (float)(s[j] / (double)counts[c]);
            }
        }
        // Repair empty clusters from the farthest member of the
        // highest-error cluster.
        for (uint32_t c = 0; c < k; c++) {
            if (counts[c] != 0) {
                continue;
            }
            uint32_t donor = (uint32_t)(std::max_element(
                                                cluster_err.begin(), cluster_err.end()) -
                                        cluster_err.begin());
            size_t far_i = 0;
            float far_d = -1;
            for (size_t i = 0; i < n; i++) {
                if (assign[i] == donor && dist[i] > far_d) {
                    far_d = dist[i];
                    far_i = i;
                }
            }
            std::copy_n(train.row(far_i), d,
                        cb.centroids.data() + (size_t)c * d);
            counts[c] = 1;
            assign[far_i] = c;
            cluster_err[donor] -= far_d;
            dist[far_i] = 0;
            cluster_err[c] = 0;
        }
        cb.refresh_sq_norms();
    }
    return cb;
}

} // namespace vlq
