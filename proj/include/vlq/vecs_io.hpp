#pragma once

#include <string>

#include "vlq/vecset.hpp"

namespace vlq {

// On-disk record layouts, all little-endian: a 4-byte signed dimension d
// followed by d values (f32 / u8 / i32 respectively).
enum class VecsKind {
    F32,  // .fvecs
    Byte, // .bvecs
    Int,  // .ivecs
};

// Guesses the kind from a path extension; defaults to F32.
VecsKind vecs_kind_from_path(const std::string& path);

// Reads all records; byte and int payloads are widened to float.
// Throws on mismatched per-record dimension, truncated records, or an
// empty file.
VectorSet read_vecs(const std::string& path, VecsKind kind);

// Writes every record with the set's dimension. Byte kind requires all
// values to be integers in [0, 255].
void write_vecs(const VectorSet& set, const std::string& path, VecsKind kind);

// Ground-truth id matrices ride the int-vecs format.
GroundTruth read_ground_truth(const std::string& path);
void write_ground_truth(const GroundTruth& gt, const std::string& path);

} // namespace vlq
