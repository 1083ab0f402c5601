#include "vlq/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>
#include <vector>

namespace vlq {

static std::atomic<int> g_max_threads{0};

void set_max_threads(int nt) {
    g_max_threads.store(nt < 0 ? 0 : nt);
}

int max_threads() {
    int nt = g_max_threads.load();
    if (nt > 0) {
        return nt;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)hw;
}

void parallel_for(size_t n, const std::function<void(size_t, size_t)>& fn) {
    if (n == 0) {
        return;
    }
    int nt = max_threads();
    if (nt <= 1 || n < 1024) {
        fn(0, n);
        return;
    }
    // Fixed-size chunks independent of nt; workers pull the next chunk.
    size_t chunk = std::max<size_t>(256, n / (size_t)(nt * 8));
    size_t nchunks = (n + chunk - 1) / chunk;
    std::atomic<size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto worker = [&]() {
        try {
            for (;;) {
                size_t c = next.fetch_add(1);
                if (c >= nchunks) {
                    break;
                }
                size_t b = c * chunk;
                size_t e = std::min(n, b + chunk);
                fn(b, e);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!err) {
                err = std::current_exception();
            }
            next.store(nchunks); // stop remaining work
        }
    };
    std::vector<std::thread> threads;
    threads.reserve(nt - 1);
    for (int t = 1; t < nt; t++) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& th : threads) {
        th.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

} // namespace vlq
