#include "roivault/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "roivault/nifti.hpp"

namespace roivault {

Volume spatial_normalize(const Volume& v, const std::array<double, 3>& target_spacing) {
    if (v.rank() != 3) throw BadDims("spatial_normalize requires rank 3");
    for (double t : target_spacing)
        if (!(std::isfinite(t) && t > 0.0))
            throw NonPositiveSpacing("target spacing must be finite and > 0");

    std::vector<std::int64_t> out_dims(3);
    for (int ax = 0; ax < 3; ++ax) {
        double extent = static_cast<double>(v.dims[ax]) * v.spacing[ax];
        out_dims[ax] = std::max<std::int64_t>(
            1, static_cast<std::int64_t>(std::llround(extent / target_spacing[ax])));
    }

    Volume out = v;
    out.dims = out_dims;
    out.spacing = {target_spacing[0], target_spacing[1], target_spacing[2]};
    const std::size_t bpv = v.bytes_per_voxel();
    out.voxel_data.resize(static_cast<std::size_t>(out.voxel_count()) * bpv);

    // voxel-center mapping: src = floor((i + 0.5) * target / spacing), clamped
    std::array<std::vector<std::int64_t>, 3> src_idx;
    for (int ax = 0; ax < 3; ++ax) {
        src_idx[ax].resize(out_dims[ax]);
        for (std::int64_t i = 0; i < out_dims[ax]; ++i) {
            double phys = (static_cast<double>(i) + 0.5) * target_spacing[ax];
            auto s = static_cast<std::int64_t>(std::floor(phys / v.spacing[ax]));
            src_idx[ax][i] = std::clamp<std::int64_t>(s, 0, v.dims[ax] - 1);
        }
    }

    const std::uint8_t* in = v.voxel_data.data();
    std::uint8_t* dst = out.voxel_data.data();
    for (std::int64_t k = 0; k < out_dims[2]; ++k) {
        std::int64_t sk = src_idx[2][k] * v.dims[0] * v.dims[1];
        for (std::int64_t j = 0; j < out_dims[1]; ++j) {
            std::int64_t sj = sk + src_idx[1][j] * v.dims[0];
            for (std::int64_t i = 0; i < out_dims[0]; ++i) {
                std::memcpy(dst, in + static_cast<std::size_t>(sj + src_idx[0][i]) * bpv, bpv);
                dst += bpv;
            }
        }
    }
    sync_header(out);
    return out;
}

std::array<double, 3> median_spacing(const std::vector<std::array<double, 3>>& spacings) {
    if (spacings.empty()) throw EmptyInput("median_spacing needs at least one triple");
    std::array<double, 3> out{};
    std::vector<double> axis(spacings.size());
    for (int ax = 0; ax < 3; ++ax) {
        for (std::size_t i = 0; i < spacings.size(); ++i) axis[i] = spacings[i][ax];
        std::sort(axis.begin(), axis.end());
        std::size_t n = axis.size();
        out[ax] = n % 2 ? axis[n / 2] : 0.5 * (axis[n / 2 - 1] + axis[n / 2]);
    }
    return out;
}

namespace {

// linear-interpolation percentile of a sorted vector, p in [0, 100]
double percentile_sorted(const std::vector<double>& sorted, double p) {
    double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(rank));
    auto hi = static_cast<std::size_t>(std::ceil(rank));
    double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

std::pair<Volume, VolumeStats> intensity_normalize(const Volume& v, bool minmax_rescale) {
    const std::int64_t n = v.voxel_count();
    std::vector<double> vals(n);
    for (std::int64_t i = 0; i < n; ++i) vals[i] = v.value_at(i);

    std::vector<double> sorted = vals;
    std::sort(sorted.begin(), sorted.end());

    VolumeStats stats;
    stats.p_low = percentile_sorted(sorted, 0.5);
    stats.p_high = percentile_sorted(sorted, 99.5);

    double sum = 0.0;
    for (auto& x : vals) {
        x = std::clamp(x, stats.p_low, stats.p_high);
        sum += x;
    }
    stats.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double x : vals) {
        double d = x - stats.mean;
        ss += d * d;
    }
    stats.stddev = std::sqrt(ss / static_cast<double>(n));

    // fresh little-endian F32 volume with a synthesized header; keeps the
    // result serializable even when the input was big-endian
    std::vector<std::uint8_t> zeros(static_cast<std::size_t>(n) * 4, 0);
    Volume out = ingest_raw(v.dims, Datatype::F32, v.spacing, zeros);

    if (stats.stddev == 0.0 && !minmax_rescale) {
        stats.degenerate = true; // all-zero output, caller decides how loud to be
    } else if (minmax_rescale) {
        double range = stats.p_high - stats.p_low;
        if (range == 0.0) {
            stats.degenerate = true;
        } else {
            for (std::int64_t i = 0; i < n; ++i)
                out.set_value(i, (vals[i] - stats.p_low) / range);
        }
    } else {
        for (std::int64_t i = 0; i < n; ++i)
            out.set_value(i, (vals[i] - stats.mean) / stats.stddev);
    }
    return {std::move(out), stats};
}

} // namespace roivault
