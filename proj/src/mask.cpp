#include "roivault/mask.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

#include "roivault/nifti.hpp"

namespace roivault {

RoiMask RoiMask::from_bits(std::vector<std::int64_t> dims, std::vector<std::uint8_t> bits) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    if (static_cast<std::int64_t>(bits.size()) != n)
        throw DimsMismatch("bit buffer does not match dims");
    RoiMask m;
    m.dims = std::move(dims);
    m.bits = std::move(bits);
    for (auto& b : m.bits) {
        b = b ? 1 : 0;
        m.roi_count += b;
    }
    return m;
}

std::int64_t RoiMask::total() const {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

double RoiMask::roi_fraction() const {
    return static_cast<double>(roi_count) / static_cast<double>(total());
}

LabelVolume LabelVolume::from_volume(const Volume& v) {
    LabelVolume lv;
    lv.dims = v.dims;
    lv.labels.resize(v.voxel_count());
    for (std::int64_t i = 0; i < v.voxel_count(); ++i) {
        double val = v.value_at(i);
        lv.labels[i] = static_cast<std::uint8_t>(std::clamp(val, 0.0, 255.0));
    }
    return lv;
}

RoiMask merge_labels(const LabelVolume& lv, const std::set<int>& foreground) {
    if (foreground.empty()) throw EmptyInput("foreground label set is empty");
    std::array<std::uint8_t, 256> in_fg{};
    for (int l : foreground)
        if (l >= 0 && l <= 255) in_fg[static_cast<std::size_t>(l)] = 1;

    std::vector<std::uint8_t> bits(lv.labels.size());
    for (std::size_t i = 0; i < lv.labels.size(); ++i) bits[i] = in_fg[lv.labels[i]];
    return RoiMask::from_bits(lv.dims, std::move(bits));
}

RoiMask mask_from_volume(const Volume& v) {
    std::vector<std::uint8_t> bits(v.voxel_count());
    for (std::int64_t i = 0; i < v.voxel_count(); ++i)
        bits[i] = v.value_at(i) != 0.0 ? 1 : 0;
    return RoiMask::from_bits(v.dims, std::move(bits));
}

RoiMask load_mask(std::span<const std::uint8_t> file_bytes,
                  const std::vector<std::int64_t>& expected_dims) {
    Volume v = parse_nifti(file_bytes);
    if (!same_dims(v.dims, expected_dims))
        throw DimsMismatch("mask dims " + dims_to_string(v.dims) + " != expected " +
                           dims_to_string(expected_dims));
    return mask_from_volume(v);
}

double dice(const RoiMask& a, const RoiMask& b) {
    if (!same_dims(a.dims, b.dims))
        throw DimsMismatch("dice: mask dims differ");
    if (a.roi_count == 0 && b.roi_count == 0) return 1.0;
    std::int64_t inter = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) inter += a.bits[i] & b.bits[i];
    return 2.0 * static_cast<double>(inter) /
           static_cast<double>(a.roi_count + b.roi_count);
}

RoiMask synthetic_mask(const std::vector<std::int64_t>& dims, double roi_fraction,
                       std::uint64_t seed) {
    if (roi_fraction < 0.0 || roi_fraction > 1.0)
        throw EmptyInput("roi_fraction must lie in [0, 1]");
    std::int64_t total = 1;
    for (auto d : dims) total *= d;
    auto target = static_cast<std::int64_t>(std::llround(roi_fraction * static_cast<double>(total)));

    std::vector<std::uint8_t> bits(total, 0);
    if (target == total) {
        std::fill(bits.begin(), bits.end(), 1);
        return RoiMask::from_bits(dims, std::move(bits));
    }
    if (target > 0) {
        // ellipsoid distance field; the target-th smallest values form the mask
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> jitter(-0.05, 0.05);
        std::vector<double> center(dims.size()), semi(dims.size());
        for (std::size_t ax = 0; ax < dims.size(); ++ax) {
            double c = 0.5 * static_cast<double>(dims[ax]);
            center[ax] = c + jitter(rng) * static_cast<double>(dims[ax]);
            semi[ax] = std::max(1.0, c);
        }

        std::vector<std::pair<float, std::uint32_t>> field(total);
        std::vector<std::int64_t> idx(dims.size(), 0);
        for (std::int64_t lin = 0; lin < total; ++lin) {
            double r2 = 0.0;
            for (std::size_t ax = 0; ax < dims.size(); ++ax) {
                double d = (static_cast<double>(idx[ax]) + 0.5 - center[ax]) / semi[ax];
                r2 += d * d;
            }
            field[lin] = {static_cast<float>(r2), static_cast<std::uint32_t>(lin)};
            for (std::size_t ax = 0; ax < dims.size(); ++ax) {
                if (++idx[ax] < dims[ax]) break;
                idx[ax] = 0;
            }
        }
        std::nth_element(field.begin(), field.begin() + target, field.end());
        for (std::int64_t i = 0; i < target; ++i) bits[field[i].second] = 1;
    }
    return RoiMask::from_bits(dims, std::move(bits));
}

Volume mask_to_volume(const RoiMask& m, const std::vector<double>& spacing) {
    return ingest_raw(m.dims, Datatype::U8, spacing, m.bits);
}

} // namespace roivault
