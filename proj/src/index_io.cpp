#include <cstring>
#include <fstream>
#include <stdexcept>

#include "vlq/index.hpp"

namespace vlq {

namespace {

constexpr char kMagic[4] = {'V', 'L', 'Q', '1'};
constexpr uint32_t kVersion = 1;
constexpr uint32_t kFlagClamped = 1u << 0;
constexpr uint32_t kFlagT3 = 1u << 1;

struct Writer {
    std::ofstream out;
    explicit Writer(const std::string& path)
            : out(path, std::ios::binary | std::ios::trunc) {
        if (!out) {
            throw std::runtime_error("serialize_index: cannot open " + path);
        }
    }
    void bytes(const void* p, size_t n) {
        out.write(reinterpret_cast<const char*>(p), (std::streamsize)n);
    }
    void u32(uint32_t v) {
        bytes(&v, 4);
    }
    void f32(float v) {
        bytes(&v, 4);
    }
};

struct Reader {
    std::ifstream in;
    std::string path;
    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) {
            throw std::runtime_error("deserialize_index: cannot open " + p);
        }
    }
    void bytes(void* p, size_t n) {
        in.read(reinterpret_cast<char*>(p), (std::streamsize)n);
        if ((size_t)in.gcount() != n) {
            throw std::runtime_error("deserialize_index: truncated file " + path);
        }
    }
    uint32_t u32() {
        uint32_t v;
        bytes(&v, 4);
        return v;
    }
    float f32() {
        float v;
        bytes(&v, 4);
        return v;
    }
};

} // namespace

void serialize_index(
        const InvertedIndex& index,
        const std::string& path,
        bool store_t3) {
    Writer w(path);
    w.bytes(kMagic, 4);
    w.u32(kVersion);
    uint32_t flags = (index.clamp_lambda ? kFlagClamped : 0) |
            (store_t3 ? kFlagT3 : 0);
    w.u32(flags);
    w.u32(index.dim());
    w.u32(index.k());
    w.u32(index.n());
    w.u32(index.m());
    w.u32((uint32_t)index.base_count);
    w.f32(index.lambda_quant.lo);
    w.f32(index.lambda_quant.hi);
    w.bytes(index.codebook.centroids.data(),
            index.codebook.centroids.size() * 4);
    w.bytes(index.graph.neighbor_ids.data(),
            index.graph.neighbor_ids.size() * 4);
    w.bytes(index.graph.edge_sq_len.data(), index.graph.edge_sq_len.size() * 4);
    w.bytes(index.pq.sub_centroids.data(), index.pq.sub_centroids.size() * 4);
    if (store_t3) {
        w.bytes(index.t3.data(), index.t3.size() * 4);
    }
    for (const auto& list : index.lists) {
        w.u32((uint32_t)list.size());
        w.bytes(list.ids.data(), list.ids.size() * 4);
        w.bytes(list.codes.data(), list.codes.size());
        w.bytes(list.lambdas.data(), list.lambdas.size());
    }
    if (!w.out) {
        throw std::runtime_error("serialize_index: write failed for " + path);
    }
}

InvertedIndex deserialize_index(const std::string& path) {
    Reader r(path);
    char magic[4];
    r.bytes(magic, 4);
    if (memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("deserialize_index: bad magic in " + path);
    }
    uint32_t version = r.u32();
    if (version != kVersion) {
        throw std::runtime_error("deserialize_index: unsupported version in " + path);
    }
    uint32_t flags = r.u32();
    uint32_t dim = r.u32();
    uint32_t k = r.u32();
    uint32_t n = r.u32();
    uint32_t m = r.u32();
    uint32_t base_count = r.u32();
    if (dim == 0 || k == 0 || n == 0 || n >= k || m == 0 || dim % m != 0) {
        throw std::runtime_error("deserialize_index: invalid header in " + path);
    }
    InvertedIndex index;
    index.clamp_lambda = (flags & kFlagClamped) != 0;
    index.base_count = base_count;
    index.lambda_quant.lo = r.f32();
    index.lambda_quant.hi = r.f32();
    index.codebook.dim = dim;
    index.codebook.centroids.resize((size_t)k * dim);
    r.bytes(index.codebook.centroids.data(), index.codebook.centroids.size() * 4);
    index.codebook.refresh_sq_norms();
    index.graph.k = k;
    index.graph.n = n;
    index.graph.neighbor_ids.resize((size_t)k * n);
    r.bytes(index.graph.neighbor_ids.data(), index.graph.neighbor_ids.size() * 4);
    index.graph.edge_sq_len.resize((size_t)k * n);
    r.bytes(index.graph.edge_sq_len.data(), index.graph.edge_sq_len.size() * 4);
    index.pq.dim = dim;
    index.pq.m = m;
    index.pq.sub_centroids.resize(
            (size_t)m * PQCodebooks::ksub * index.pq.sub_dim());
    r.bytes(index.pq.sub_centroids.data(), index.pq.sub_centroids.size() * 4);
    index.pq.refresh_sq_norms();
    if (flags & kFlagT3) {
        index.t3.resize((size_t)k * m * PQCodebooks::ksub);
        r.bytes(index.t3.data(), index.t3.size() * 4);
    } else {
        index.t3 = compute_t3(index.codebook, index.pq);
    }
    index.lists.resize((size_t)k * n);
    for (auto& list : index.lists) {
        uint32_t len = r.u32();
        list.ids.resize(len);
        r.bytes(list.ids.data(), list.ids.size() * 4);
        list.codes.resize((size_t)len * m);
        r.bytes(list.codes.data(), list.codes.size());
        list.lambdas.resize(len);
        r.bytes(list.lambdas.data(), list.lambdas.size());
    }
    index.validate();
    return index;
}

} // namespace vlq
