#pragma once

#include <array>
#include <utility>
#include <vector>

#include "roivault/volume.hpp"

namespace roivault {

/// Nearest-neighbor resample of a rank-3 volume onto target_spacing.
/// Output extent per axis is max(1, round(dims[ax] * spacing[ax] / target[ax]))
/// so physical extent is preserved within one target voxel.
Volume spatial_normalize(const Volume& v, const std::array<double, 3>& target_spacing);

/// Per-axis median of a list of spacing triples; even counts take the mean of
/// the central pair.
std::array<double, 3> median_spacing(const std::vector<std::array<double, 3>>& spacings);

/// Clamp to the [0.5, 99.5] percentile band (linear-interpolation percentile),
/// then z-score with the post-clamp mean/stddev. Output is F32.
/// minmax_rescale instead maps the clamped values linearly onto [0, 1].
/// A constant input cannot be z-scored; it yields an all-zero volume with
/// stats.degenerate set.
std::pair<Volume, VolumeStats> intensity_normalize(const Volume& v,
                                                   bool minmax_rescale = false);

} // namespace roivault
