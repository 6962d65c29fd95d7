#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "roivault/volume.hpp"

namespace roivault {

/// Binary ROI mask aligned to a Volume grid. One byte per voxel, values
/// strictly 0 or 1, row-major with axis 1 fastest.
struct RoiMask {
    std::vector<std::int64_t> dims;
    std::vector<std::uint8_t> bits;
    std::int64_t roi_count = 0;

    static RoiMask from_bits(std::vector<std::int64_t> dims, std::vector<std::uint8_t> bits);
    std::int64_t total() const;
    double roi_fraction() const;
    bool operator==(const RoiMask&) const = default;
};

struct LabelVolume {
    std::vector<std::int64_t> dims;
    std::vector<std::uint8_t> labels;

    static LabelVolume from_volume(const Volume& v); // values clamped to 0..255
};

inline const std::set<int>& default_foreground() {
    static const std::set<int> fg{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    return fg;
}

/// Bit is 1 iff the voxel's label is in the foreground set.
RoiMask merge_labels(const LabelVolume& lv, const std::set<int>& foreground = default_foreground());

/// Re-binarize a volume: nonzero -> 1.
RoiMask mask_from_volume(const Volume& v);

/// Parse a NIfTI mask file, binarize, and verify dims.
RoiMask load_mask(std::span<const std::uint8_t> file_bytes,
                  const std::vector<std::int64_t>& expected_dims);

/// 2|A∩B| / (|A|+|B|); both-empty defined as 1.0.
double dice(const RoiMask& a, const RoiMask& b);

/// Deterministic centered ellipsoid grown to exactly
/// round(roi_fraction * total) voxels. The seed jitters the center.
RoiMask synthetic_mask(const std::vector<std::int64_t>& dims, double roi_fraction,
                       std::uint64_t seed);

/// Persist as a U8 NIfTI volume (0/1 voxels).
Volume mask_to_volume(const RoiMask& m, const std::vector<double>& spacing);

} // namespace roivault
