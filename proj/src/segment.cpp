#include "roivault/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "roivault/normalize.hpp"

namespace roivault {

namespace {

struct Grid {
    std::int64_t nx, ny, nz;
    std::int64_t size() const { return nx * ny * nz; }
};

Grid grid_of(const std::vector<std::int64_t>& dims) {
    if (dims.size() != 3) throw BadDims("segmentation requires rank 3");
    return {dims[0], dims[1], dims[2]};
}

// deterministic BFS flood fill over 6-neighbors; visits voxels where
// predicate(bit) holds and label[] is unset
template <typename Pred>
void flood(const Grid& g, const std::vector<std::uint8_t>& bits,
           std::vector<std::int32_t>& label, std::int64_t start, std::int32_t id,
           Pred pred, std::int64_t* count = nullptr) {
    std::vector<std::int64_t> stack{start};
    label[start] = id;
    std::int64_t n = 0;
    while (!stack.empty()) {
        std::int64_t p = stack.back();
        stack.pop_back();
        ++n;
        std::int64_t x = p % g.nx, y = (p / g.nx) % g.ny, z = p / (g.nx * g.ny);
        auto visit = [&](std::int64_t q) {
            if (label[q] == 0 && pred(bits[q])) {
                label[q] = id;
                stack.push_back(q);
            }
        };
        if (x > 0) visit(p - 1);
        if (x + 1 < g.nx) visit(p + 1);
        if (y > 0) visit(p - g.nx);
        if (y + 1 < g.ny) visit(p + g.nx);
        if (z > 0) visit(p - g.nx * g.ny);
        if (z + 1 < g.nz) visit(p + g.nx * g.ny);
    }
    if (count) *count = n;
}

} // namespace

int otsu_threshold(const std::array<std::int64_t, 256>& histogram) {
    std::int64_t total = 0;
    double sum_all = 0.0;
    for (int i = 0; i < 256; ++i) {
        total += histogram[i];
        sum_all += static_cast<double>(i) * static_cast<double>(histogram[i]);
    }
    double best_var = -1.0;
    int best_t = 1;
    std::int64_t w0 = 0;
    double sum0 = 0.0;
    for (int t = 1; t < 256; ++t) {
        w0 += histogram[t - 1];
        sum0 += static_cast<double>(t - 1) * static_cast<double>(histogram[t - 1]);
        std::int64_t w1 = total - w0;
        if (w0 == 0 || w1 == 0) continue;
        double mu0 = sum0 / static_cast<double>(w0);
        double mu1 = (sum_all - sum0) / static_cast<double>(w1);
        double var = static_cast<double>(w0) * static_cast<double>(w1) * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    return best_t;
}

RoiMask largest_component(const RoiMask& m) {
    Grid g = grid_of(m.dims);
    std::vector<std::int32_t> label(g.size(), 0);
    std::int32_t next = 0;
    std::int64_t best_count = 0;
    std::int32_t best_id = 0;
    for (std::int64_t p = 0; p < g.size(); ++p) {
        if (m.bits[p] && label[p] == 0) {
            std::int64_t count = 0;
            flood(g, m.bits, label, p, ++next, [](std::uint8_t b) { return b != 0; }, &count);
            if (count > best_count) {
                best_count = count;
                best_id = next;
            }
        }
    }
    std::vector<std::uint8_t> bits(g.size(), 0);
    for (std::int64_t p = 0; p < g.size(); ++p) bits[p] = label[p] == best_id ? 1 : 0;
    return RoiMask::from_bits(m.dims, std::move(bits));
}

namespace {

RoiMask box3_morph(const RoiMask& m, bool dilate) {
    Grid g = grid_of(m.dims);
    // voxels outside the grid count as background
    auto bit_at = [&](std::int64_t x, std::int64_t y, std::int64_t z) -> std::uint8_t {
        if (x < 0 || x >= g.nx || y < 0 || y >= g.ny || z < 0 || z >= g.nz) return 0;
        return m.bits[x + g.nx * (y + g.ny * z)];
    };
    std::vector<std::uint8_t> out(g.size());
    for (std::int64_t z = 0; z < g.nz; ++z)
        for (std::int64_t y = 0; y < g.ny; ++y)
            for (std::int64_t x = 0; x < g.nx; ++x) {
                bool hit = !dilate;
                for (std::int64_t dz = -1; dz <= 1 && hit != dilate; ++dz)
                    for (std::int64_t dy = -1; dy <= 1 && hit != dilate; ++dy)
                        for (std::int64_t dx = -1; dx <= 1; ++dx) {
                            bool b = bit_at(x + dx, y + dy, z + dz) != 0;
                            if (b == dilate) { hit = dilate; break; }
                        }
                out[x + g.nx * (y + g.ny * z)] = hit ? 1 : 0;
            }
    return RoiMask::from_bits(m.dims, std::move(out));
}

} // namespace

RoiMask close_box3(const RoiMask& m) {
    return box3_morph(box3_morph(m, true), false);
}

RoiMask fill_holes(const RoiMask& m) {
    Grid g = grid_of(m.dims);
    std::vector<std::int32_t> reached(g.size(), 0);
    auto is_bg = [](std::uint8_t b) { return b == 0; };
    for (std::int64_t z = 0; z < g.nz; ++z)
        for (std::int64_t y = 0; y < g.ny; ++y)
            for (std::int64_t x = 0; x < g.nx; ++x) {
                if (x != 0 && x != g.nx - 1 && y != 0 && y != g.ny - 1 && z != 0 &&
                    z != g.nz - 1)
                    continue; // faces only
                std::int64_t p = x + g.nx * (y + g.ny * z);
                if (m.bits[p] == 0 && reached[p] == 0)
                    flood(g, m.bits, reached, p, 1, is_bg);
            }
    std::vector<std::uint8_t> bits(g.size());
    for (std::int64_t p = 0; p < g.size(); ++p)
        bits[p] = (m.bits[p] || reached[p] == 0) ? 1 : 0;
    return RoiMask::from_bits(m.dims, std::move(bits));
}

int count_components(const RoiMask& m) {
    Grid g = grid_of(m.dims);
    std::vector<std::int32_t> label(g.size(), 0);
    std::int32_t next = 0;
    for (std::int64_t p = 0; p < g.size(); ++p)
        if (m.bits[p] && label[p] == 0)
            flood(g, m.bits, label, p, ++next, [](std::uint8_t b) { return b != 0; });
    return next;
}

RoiMask threshold_segment(const Volume& v) {
    if (v.rank() != 3) throw BadDims("threshold_segment requires rank 3");
    auto [norm, stats] = intensity_normalize(v);
    if (stats.degenerate) throw DegenerateVolume("constant volume cannot be segmented");

    const std::int64_t n = norm.voxel_count();
    std::vector<double> vals(n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < n; ++i) {
        vals[i] = norm.value_at(i);
        lo = std::min(lo, vals[i]);
        hi = std::max(hi, vals[i]);
    }
    double range = hi - lo;
    if (range == 0.0) throw DegenerateVolume("normalized volume has zero range");

    std::array<std::int64_t, 256> hist{};
    auto bin_of = [&](double x) {
        return std::clamp(static_cast<int>((x - lo) / range * 256.0), 0, 255);
    };
    for (std::int64_t i = 0; i < n; ++i) ++hist[bin_of(vals[i])];

    int t = otsu_threshold(hist);
    std::vector<std::uint8_t> bits(n);
    for (std::int64_t i = 0; i < n; ++i) bits[i] = bin_of(vals[i]) >= t ? 1 : 0;

    RoiMask m = RoiMask::from_bits(v.dims, std::move(bits));
    m = largest_component(m);
    m = close_box3(m);
    return fill_holes(m);
}

} // namespace roivault
