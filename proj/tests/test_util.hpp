#pragma once

// Shared helpers for the test suites. build_nifti constructs NIfTI-1 files
// byte-by-byte, independently of serialize_nifti, so round-trip tests are not
// self-confirming.

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "roivault/nifti.hpp"
#include "roivault/volume.hpp"

namespace testutil {

using roivault::Datatype;
using roivault::Endianness;

template <typename T>
void put(std::vector<std::uint8_t>& buf, std::size_t off, T v, Endianness e) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    if (e == Endianness::Big)
        for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
            std::swap(raw[i], raw[sizeof(T) - 1 - i]);
    std::memcpy(buf.data() + off, raw, sizeof(T));
}

inline std::int16_t nifti_code(Datatype dt) {
    switch (dt) {
    case Datatype::U8: return 2;
    case Datatype::I16: return 4;
    case Datatype::U16: return 512;
    case Datatype::F32: return 16;
    }
    return 0;
}

struct NiftiSpec {
    std::vector<std::int16_t> dims;
    Datatype datatype = Datatype::U8;
    Endianness endian = Endianness::Little;
    std::vector<float> pixdim;     // per axis; empty -> 1.0
    float vox_offset = 352.0f;
    float scl_slope = 0.0f;
    float scl_inter = 0.0f;
    const char* magic = "n+1";
};

inline std::vector<std::uint8_t> build_nifti(const NiftiSpec& spec,
                                             const std::vector<std::uint8_t>& voxels) {
    auto off = static_cast<std::size_t>(spec.vox_offset);
    std::vector<std::uint8_t> f(off + voxels.size(), 0);
    const Endianness e = spec.endian;
    put<std::int32_t>(f, 0, 348, e);
    put<std::int16_t>(f, 40, static_cast<std::int16_t>(spec.dims.size()), e);
    for (std::size_t i = 0; i < 7; ++i)
        put<std::int16_t>(f, 42 + 2 * i, i < spec.dims.size() ? spec.dims[i] : 1, e);
    put<std::int16_t>(f, 70, nifti_code(spec.datatype), e);
    std::int16_t bits = 8;
    if (spec.datatype == Datatype::I16 || spec.datatype == Datatype::U16) bits = 16;
    if (spec.datatype == Datatype::F32) bits = 32;
    put<std::int16_t>(f, 72, bits, e);
    for (std::size_t i = 0; i < 8; ++i) {
        float pd = 1.0f;
        if (i >= 1 && i - 1 < spec.pixdim.size()) pd = spec.pixdim[i - 1];
        put<float>(f, 76 + 4 * i, pd, e);
    }
    put<float>(f, 108, spec.vox_offset, e);
    put<float>(f, 112, spec.scl_slope, e);
    put<float>(f, 116, spec.scl_inter, e);
    std::memcpy(f.data() + 344, spec.magic, 3);
    std::memcpy(f.data() + off, voxels.data(), voxels.size());
    return f;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> out(n);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng());
    return out;
}

/// Little-endian test volume filled with random bytes (F32 exponents tamed so
/// values stay finite).
inline roivault::Volume random_test_volume(const std::vector<std::int64_t>& dims, Datatype dt,
                                           std::uint64_t seed) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    auto bytes = random_bytes(static_cast<std::size_t>(n) * roivault::datatype_size(dt), seed);
    if (dt == Datatype::F32)
        for (std::size_t off = 0; off + 4 <= bytes.size(); off += 4) bytes[off + 3] &= 0x3F;
    return roivault::ingest_raw(dims, dt, std::vector<double>(dims.size(), 1.0), bytes);
}

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testutil
