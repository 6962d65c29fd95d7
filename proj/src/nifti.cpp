#include "roivault/nifti.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>

#include <zlib.h>

namespace roivault {

namespace {

// NIfTI-1 header field offsets
constexpr std::size_t kOffDim = 40;        // int16[8]
constexpr std::size_t kOffDatatype = 70;   // int16
constexpr std::size_t kOffBitpix = 72;     // int16
constexpr std::size_t kOffPixdim = 76;     // float[8]
constexpr std::size_t kOffVoxOffset = 108; // float
constexpr std::size_t kOffMagic = 344;     // char[4]
constexpr std::size_t kHeaderSize = 348;
constexpr std::size_t kMinFileSize = 352;

template <typename T>
T read_field(std::span<const std::uint8_t> buf, std::size_t off, Endianness e) {
    T v;
    std::memcpy(&v, buf.data() + off, sizeof(T));
    if (e == Endianness::Big) {
        auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
        std::reverse(raw.begin(), raw.end());
        v = std::bit_cast<T>(raw);
    }
    return v;
}

template <typename T>
void write_field(std::uint8_t* buf, std::size_t off, T v, Endianness e) {
    if (e == Endianness::Big) {
        auto raw = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(v);
        std::reverse(raw.begin(), raw.end());
        v = std::bit_cast<T>(raw);
    }
    std::memcpy(buf + off, &v, sizeof(T));
}

} // namespace

Volume parse_nifti(std::span<const std::uint8_t> file_bytes) {
    if (file_bytes.size() < kMinFileSize)
        throw TruncatedData("NIfTI-1 file must be at least 352 bytes, got " +
                            std::to_string(file_bytes.size()));

    const char* magic = reinterpret_cast<const char*>(file_bytes.data() + kOffMagic);
    if (std::memcmp(magic, "ni1\0", 4) == 0)
        throw BadMagic("paired .hdr/.img files (magic ni1) are not supported");
    if (std::memcmp(magic, "n+1\0", 4) != 0)
        throw BadMagic("missing NIfTI-1 magic n+1");

    // endianness heuristic: dim[0] must land in 1..7 under one of the two reads
    Endianness endian = Endianness::Little;
    std::int16_t rank = read_field<std::int16_t>(file_bytes, kOffDim, Endianness::Little);
    if (rank < 1 || rank > 7) {
        rank = read_field<std::int16_t>(file_bytes, kOffDim, Endianness::Big);
        if (rank < 1 || rank > 7)
            throw BadDims("dim[0] invalid under both endiannesses");
        endian = Endianness::Big;
    }

    Volume v;
    v.endianness = endian;
    v.datatype = datatype_from_nifti_code(
        read_field<std::int16_t>(file_bytes, kOffDatatype, endian));

    for (int ax = 1; ax <= rank; ++ax) {
        std::int16_t d = read_field<std::int16_t>(file_bytes, kOffDim + 2 * ax, endian);
        if (d < 1) throw BadDims("dim[" + std::to_string(ax) + "] = " + std::to_string(d));
        v.dims.push_back(d);
        float pd = read_field<float>(file_bytes, kOffPixdim + 4 * ax, endian);
        double sp = std::fabs(static_cast<double>(pd));
        if (!(std::isfinite(sp) && sp > 0.0)) {
            std::cerr << "roivault: warning: pixdim[" << ax << "] is " << pd
                      << ", using 1.0\n";
            sp = 1.0;
        }
        v.spacing.push_back(sp);
    }

    float vox_off_f = read_field<float>(file_bytes, kOffVoxOffset, endian);
    std::size_t vox_offset = static_cast<std::size_t>(vox_off_f);
    if (vox_off_f < static_cast<float>(kHeaderSize))
        throw TruncatedData("vox_offset " + std::to_string(vox_off_f) + " below header size");

    std::size_t need = static_cast<std::size_t>(v.voxel_count()) * v.bytes_per_voxel();
    if (file_bytes.size() < vox_offset + need)
        throw TruncatedData("file ends before vox_offset + voxel bytes");

    v.header_blob.assign(file_bytes.begin(), file_bytes.begin() + vox_offset);
    v.voxel_data.assign(file_bytes.begin() + vox_offset,
                        file_bytes.begin() + vox_offset + need);
    v.validate();
    return v;
}

std::vector<std::uint8_t> serialize_nifti(const Volume& v) {
    v.validate();
    if (v.header_blob.size() < kHeaderSize)
        throw InconsistentHeader("header_blob shorter than 348 bytes");

    std::span<const std::uint8_t> hdr(v.header_blob);
    std::int16_t rank = read_field<std::int16_t>(hdr, kOffDim, v.endianness);
    if (rank != v.rank())
        throw InconsistentHeader("header dim[0] does not match Volume rank");
    for (int ax = 1; ax <= rank; ++ax)
        if (read_field<std::int16_t>(hdr, kOffDim + 2 * ax, v.endianness) != v.dims[ax - 1])
            throw InconsistentHeader("header dim[" + std::to_string(ax) +
                                     "] does not match Volume dims");
    if (datatype_from_nifti_code(read_field<std::int16_t>(hdr, kOffDatatype, v.endianness)) !=
        v.datatype)
        throw InconsistentHeader("header datatype does not match Volume datatype");

    std::size_t vox_offset =
        static_cast<std::size_t>(read_field<float>(hdr, kOffVoxOffset, v.endianness));
    if (vox_offset < v.header_blob.size())
        throw InconsistentHeader("vox_offset smaller than header_blob");

    std::vector<std::uint8_t> out;
    out.reserve(vox_offset + v.voxel_data.size());
    out.insert(out.end(), v.header_blob.begin(), v.header_blob.end());
    out.resize(vox_offset, 0); // pad to vox_offset
    out.insert(out.end(), v.voxel_data.begin(), v.voxel_data.end());
    return out;
}

Volume ingest_raw(const std::vector<std::int64_t>& dims, Datatype dt,
                  const std::vector<double>& spacing,
                  std::span<const std::uint8_t> data) {
    if (dims.empty() || dims.size() > 7) throw BadDims("rank must be 1..7");
    std::int64_t n = 1;
    for (auto d : dims) {
        if (d < 1) throw BadDims("axis extent must be >= 1");
        n *= d;
    }
    std::size_t need = static_cast<std::size_t>(n) * datatype_size(dt);
    if (data.size() != need)
        throw SizeMismatch("buffer is " + std::to_string(data.size()) + " bytes, dims need " +
                           std::to_string(need));

    Volume v;
    v.dims = dims;
    v.datatype = dt;
    v.spacing = spacing;
    v.spacing.resize(dims.size(), 1.0);
    v.endianness = Endianness::Little;
    v.voxel_data.assign(data.begin(), data.end());
    v.header_blob.assign(kMinFileSize, 0);

    std::uint8_t* h = v.header_blob.data();
    write_field<std::int32_t>(h, 0, 348, Endianness::Little);
    write_field<float>(h, kOffVoxOffset, 352.0f, Endianness::Little);
    std::memcpy(h + kOffMagic, "n+1\0", 4);
    h[38] = 'r'; // regular
    sync_header(v);
    v.validate();
    return v;
}

void sync_header(Volume& v) {
    if (v.header_blob.size() < kHeaderSize)
        throw InconsistentHeader("header_blob shorter than 348 bytes");
    std::uint8_t* h = v.header_blob.data();
    const Endianness e = v.endianness;
    for (std::size_t i = 0; i < 8; ++i) {
        write_field<std::int16_t>(h, kOffDim + 2 * i,
                                  i == 0 ? static_cast<std::int16_t>(v.rank())
                                  : i <= v.dims.size()
                                      ? static_cast<std::int16_t>(v.dims[i - 1])
                                      : std::int16_t{1},
                                  e);
        write_field<float>(h, kOffPixdim + 4 * i,
                           i >= 1 && i <= v.spacing.size()
                               ? static_cast<float>(v.spacing[i - 1])
                               : 1.0f,
                           e);
    }
    write_field<std::int16_t>(h, kOffDatatype, nifti_datatype_code(v.datatype), e);
    write_field<std::int16_t>(h, kOffBitpix,
                              static_cast<std::int16_t>(8 * v.bytes_per_voxel()), e);
}

bool is_gzip(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 2 && bytes[0] == 0x1F && bytes[1] == 0x8B;
}

std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                     Z_DEFAULT_STRATEGY) != Z_OK)
        throw IoError("deflateInit2 failed");
    std::vector<std::uint8_t> out(deflateBound(&zs, bytes.size()));
    zs.next_in = const_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw IoError("gzip compression failed");
    out.resize(zs.total_out);
    return out;
}

std::vector<std::uint8_t> gzip_decompress(std::span<const std::uint8_t> bytes) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw IoError("inflateInit2 failed");
    std::vector<std::uint8_t> out;
    std::array<std::uint8_t, 1 << 16> buf;
    zs.next_in = const_cast<Bytef*>(bytes.data());
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        zs.next_out = buf.data();
        zs.avail_out = static_cast<uInt>(buf.size());
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw IoError("gzip decompression failed");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - zs.avail_out));
    }
    inflateEnd(&zs);
    return out;
}

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

Volume read_volume(const std::filesystem::path& path) {
    auto bytes = read_file(path);
    if (is_gzip(bytes)) bytes = gzip_decompress(bytes);
    return parse_nifti(bytes);
}

void write_volume(const std::filesystem::path& path, const Volume& v, bool gzip) {
    auto bytes = serialize_nifti(v);
    if (gzip) bytes = gzip_compress(bytes);

    // temp-and-rename so failures never leave a partial file
    std::random_device rd;
    auto tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            std::filesystem::remove(tmp);
            throw IoError("short write to " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("rename to " + path.string() + " failed: " + ec.message());
    }
}

} // namespace roivault
