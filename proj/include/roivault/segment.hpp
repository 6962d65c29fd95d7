#pragma once

#include <array>
#include <cstdint>

#include "roivault/mask.hpp"
#include "roivault/volume.hpp"

namespace roivault {

/// Classical ROI segmenter: intensity-normalize, Otsu-threshold the 256-bin
/// histogram, keep the largest 6-connected foreground component, close with a
/// 3x3x3 box, then fill internal holes (background flood fill from the faces).
/// Throws DegenerateVolume for constant input.
RoiMask threshold_segment(const Volume& v);

/// Otsu threshold bin for a 256-bin histogram; returns the first bin of the
/// foreground class.
int otsu_threshold(const std::array<std::int64_t, 256>& histogram);

/// Keep only the largest 6-connected component of the set bits.
RoiMask largest_component(const RoiMask& m);

/// Morphological closing (dilate then erode) with a 3x3x3 box element.
RoiMask close_box3(const RoiMask& m);

/// Set to 1 every background voxel not 6-connected to a volume face.
RoiMask fill_holes(const RoiMask& m);

/// Number of 6-connected foreground components.
int count_components(const RoiMask& m);

} // namespace roivault
