#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "roivault/volume.hpp"

namespace roivault {

/// Parse a single-file NIfTI-1 image (magic "n+1\0"). Endianness is detected
/// via the dim[0] in [1,7] heuristic. scl_slope/scl_inter stay in the
/// preserved header and are never applied to voxel data.
Volume parse_nifti(std::span<const std::uint8_t> file_bytes);

/// Emit header_blob verbatim, zero-padded to vox_offset, followed by the voxel
/// bytes. Throws InconsistentHeader if the header no longer matches the
/// in-memory dims/datatype (call sync_header after edits).
std::vector<std::uint8_t> serialize_nifti(const Volume& v);

/// Build a Volume around a raw voxel buffer with a synthesized minimal
/// little-endian NIfTI-1 header (vox_offset 352).
Volume ingest_raw(const std::vector<std::int64_t>& dims, Datatype dt,
                  const std::vector<double>& spacing,
                  std::span<const std::uint8_t> data);

/// Rewrite dim/datatype/bitpix/pixdim in header_blob from the Volume fields.
void sync_header(Volume& v);

/// File I/O; reads transparently decompress gzip (.nii.gz, 0x1F 0x8B prefix).
Volume read_volume(const std::filesystem::path& path);
void write_volume(const std::filesystem::path& path, const Volume& v, bool gzip = false);

/// gzip helpers (exposed for tests)
bool is_gzip(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> gzip_compress(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> gzip_decompress(std::span<const std::uint8_t> bytes);

} // namespace roivault
