#include "vlq/vecs_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace vlq {

VecsKind vecs_kind_from_path(const std::string& path) {
    auto ends_with = [&](const char* suf) {
        size_t n = strlen(suf);
        return path.size() >= n && path.compare(path.size() - n, n, suf) == 0;
    };
    if (ends_with(".bvecs")) {
        return VecsKind::Byte;
    }
    if (ends_with(".ivecs")) {
        return VecsKind::Int;
    }
    return VecsKind::F32;
}

static size_t value_size(VecsKind kind) {
    return kind == VecsKind::Byte ? 1 : 4;
}

VectorSet read_vecs(const std::string& path, VecsKind kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_vecs: cannot open " + path);
    }
    VectorSet set;
    std::vector<char> buf;
    size_t nrec = 0;
    for (;;) {
        int32_t d = 0;
        in.read(reinterpret_cast<char*>(&d), 4);
        if (in.gcount() == 0) {
            break; // clean EOF
        }
        if (in.gcount() != 4) {
            throw std::runtime_error("read_vecs: truncated record header in " + path);
        }
        if (d <= 0) {
            throw std::runtime_error("read_vecs: non-positive dimension in " + path);
        }
        if (nrec == 0) {
            set.dim = (uint32_t)d;
        } else if ((uint32_t)d != set.dim) {
            throw std::runtime_error("read_vecs: mismatched record dimension in " + path);
        }
        size_t bytes = (size_t)d * value_size(kind);
        buf.resize(bytes);
        in.read(buf.data(), (std::streamsize)bytes);
        if ((size_t)in.gcount() != bytes) {
            throw std::runtime_error("read_vecs: truncated record payload in " + path);
        }
        size_t off = set.data.size();
        set.data.resize(off + d);
        switch (kind) {
            case VecsKind::F32:
                memcpy(set.data.data() + off, buf.data(), bytes);
                break;
            case VecsKind::Byte:
                for (int32_t i = 0; i < d; i++) {
                    set.data[off + i] = (float)(uint8_t)buf[i];
                }
                break;
            case VecsKind::Int:
                for (int32_t i = 0; i < d; i++) {
                    int32_t v;
                    memcpy(&v, buf.data() + 4 * i, 4);
                    set.data[off + i] = (float)v;
                }
                break;
        }
        nrec++;
    }
    if (nrec == 0) {
        throw std::runtime_error("read_vecs: no records in " + path);
    }
    set.validate();
    return set;
}

void write_vecs(const VectorSet& set, const std::string& path, VecsKind kind) {
    set.validate();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_vecs: cannot open " + path);
    }
    size_t n = set.count();
    int32_t d = (int32_t)set.dim;
    std::vector<char> buf((size_t)set.dim * value_size(kind));
    for (size_t r = 0; r < n; r++) {
        const float* v = set.row(r);
        switch (kind) {
            case VecsKind::F32:
                memcpy(buf.data(), v, 4 * (size_t)d);
                break;
            case VecsKind::Byte:
                for (int32_t i = 0; i < d; i++) {
                    float f = v[i];
                    if (f < 0 || f > 255 || f != std::floor(f)) {
                        throw std::runtime_error(
                                "write_vecs: value not representable as byte");
                    }
                    buf[i] = (char)(uint8_t)f;
                }
                break;
            case VecsKind::Int:
                for (int32_t i = 0; i < d; i++) {
                    int32_t iv = (int32_t)v[i];
                    memcpy(buf.data() + 4 * i, &iv, 4);
                }
                break;
        }
        out.write(reinterpret_cast<const char*>(&d), 4);
        out.write(buf.data(), (std::streamsize)buf.size());
    }
    if (!out) {
        throw std::runtime_error("write_vecs: write failed for " + path);
    }
}

// Direct int-vecs I/O: ids must stay exact, so no float widening here.
GroundTruth read_ground_truth(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_ground_truth: cannot open " + path);
    }
    GroundTruth gt;
    size_t nrec = 0;
    for (;;) {
        int32_t d = 0;
        in.read(reinterpret_cast<char*>(&d), 4);
        if (in.gcount() == 0) {
            break;
        }
        if (in.gcount() != 4 || d <= 0) {
            throw std::runtime_error("read_ground_truth: bad record in " + path);
        }
        if (nrec == 0) {
            gt.k_per_query = (uint32_t)d;
        } else if ((uint32_t)d != gt.k_per_query) {
            throw std::runtime_error(
                    "read_ground_truth: mismatched record dimension in " + path);
        }
        size_t off = gt.ids.size();
        gt.ids.resize(off + d);
        in.read(reinterpret_cast<char*>(gt.ids.data() + off), 4 * (std::streamsize)d);
        if ((size_t)in.gcount() != 4 * (size_t)d) {
            throw std::runtime_error("read_ground_truth: truncated record in " + path);
        }
        nrec++;
    }
    return gt;
}

void write_ground_truth(const GroundTruth& gt, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("write_ground_truth: cannot open " + path);
    }
    int32_t d = (int32_t)gt.k_per_query;
    for (size_t q = 0; q < gt.count(); q++) {
        out.write(reinterpret_cast<const char*>(&d), 4);
        out.write(reinterpret_cast<const char*>(gt.row(q)), 4 * (std::streamsize)d);
    }
    if (!out) {
        throw std::runtime_error("write_ground_truth: write failed for " + path);
    }
}

} // namespace vlq
