#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "roivault/normalize.hpp"
#include "test_util.hpp"

using namespace roivault;
using namespace testutil;

TEST_CASE("identity resample leaves voxel data untouched") {
    Volume v = random_test_volume({5, 6, 7}, Datatype::U16, 1);
    v.spacing = {1.0, 2.0, 0.5};
    sync_header(v);
    Volume out = spatial_normalize(v, {1.0, 2.0, 0.5});
    CHECK(out.dims == v.dims);
    CHECK(out.voxel_data == v.voxel_data);
}

TEST_CASE("downsample 10^3 at 1mm to 2mm gives 5^3") {
    Volume v = random_test_volume({10, 10, 10}, Datatype::U8, 2);
    Volume out = spatial_normalize(v, {2.0, 2.0, 2.0});
    CHECK(out.dims == std::vector<std::int64_t>{5, 5, 5});
}

TEST_CASE("resize formula on the 0.958mm scan geometry") {
    // 140x230x195 at 0.958x0.958x3.0 -> isotropic 0.958: round(195*3.0/0.958) = 611
    Volume v = random_test_volume({14, 23, 195}, Datatype::U8, 3); // thin in-plane to keep it fast
    v.spacing = {0.958, 0.958, 3.0};
    sync_header(v);
    Volume out = spatial_normalize(v, {0.958, 0.958, 0.958});
    CHECK(out.dims[2] == 611);
    CHECK(out.dims[0] == 14);
    CHECK(out.dims[1] == 23);
}

TEST_CASE("resampling preserves physical extent within one target voxel") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::int64_t> dim_dist(1, 20);
    std::uniform_real_distribution<double> sp_dist(0.2, 4.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int64_t> dims{dim_dist(rng), dim_dist(rng), dim_dist(rng)};
        Volume v = random_test_volume(dims, Datatype::U8, trial);
        v.spacing = {sp_dist(rng), sp_dist(rng), sp_dist(rng)};
        sync_header(v);
        std::array<double, 3> target{sp_dist(rng), sp_dist(rng), sp_dist(rng)};
        Volume out = spatial_normalize(v, target);
        for (int ax = 0; ax < 3; ++ax) {
            double in_extent = static_cast<double>(v.dims[ax]) * v.spacing[ax];
            double out_extent = static_cast<double>(out.dims[ax]) * target[ax];
            CHECK(std::fabs(out_extent - in_extent) <= target[ax] + 1e-9);
        }
    }
}

TEST_CASE("spatial_normalize input checks") {
    Volume v = random_test_volume({4, 4}, Datatype::U8, 5);
    CHECK_THROWS_AS(spatial_normalize(v, {1, 1, 1}), BadDims);
    Volume v3 = random_test_volume({4, 4, 4}, Datatype::U8, 5);
    CHECK_THROWS_AS(spatial_normalize(v3, {1, 0, 1}), NonPositiveSpacing);
}

TEST_CASE("median_spacing") {
    CHECK(median_spacing({{1, 1, 1}}) == std::array<double, 3>{1, 1, 1});
    CHECK(median_spacing({{1, 2, 3}, {3, 2, 1}, {2, 2, 2}}) == std::array<double, 3>{2, 2, 2});
    CHECK(median_spacing({{1, 1, 1}, {3, 3, 3}}) == std::array<double, 3>{2, 2, 2});
    CHECK_THROWS_AS(median_spacing({}), EmptyInput);
}

TEST_CASE("median_spacing matches a sort-and-pick oracle") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> sp(0.1, 5.0);
    std::uniform_int_distribution<int> len(1, 99);
    for (int trial = 0; trial < 50; ++trial) {
        int n = len(rng);
        std::vector<std::array<double, 3>> list(n);
        for (auto& t : list) t = {sp(rng), sp(rng), sp(rng)};
        auto got = median_spacing(list);
        for (int ax = 0; ax < 3; ++ax) {
            std::vector<double> axis;
            for (auto& t : list) axis.push_back(t[ax]);
            std::sort(axis.begin(), axis.end());
            double expect = n % 2 ? axis[n / 2] : 0.5 * (axis[n / 2 - 1] + axis[n / 2]);
            CHECK(got[ax] == doctest::Approx(expect).epsilon(1e-15));
        }
    }
}

namespace {

Volume volume_from_values(const std::vector<std::int64_t>& dims,
                          const std::vector<float>& vals) {
    std::vector<std::uint8_t> bytes(vals.size() * 4);
    std::memcpy(bytes.data(), vals.data(), bytes.size());
    return ingest_raw(dims, Datatype::F32, std::vector<double>(dims.size(), 1.0), bytes);
}

std::pair<double, double> mean_std(const Volume& v) {
    double sum = 0.0;
    for (std::int64_t i = 0; i < v.voxel_count(); ++i) sum += v.value_at(i);
    double mean = sum / static_cast<double>(v.voxel_count());
    double ss = 0.0;
    for (std::int64_t i = 0; i < v.voxel_count(); ++i) {
        double d = v.value_at(i) - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / static_cast<double>(v.voxel_count()))};
}

} // namespace

TEST_CASE("constant volume is degenerate") {
    Volume v = volume_from_values({2, 2, 2}, std::vector<float>(8, 3.0f));
    auto [out, stats] = intensity_normalize(v);
    CHECK(stats.degenerate);
    for (std::int64_t i = 0; i < out.voxel_count(); ++i) CHECK(out.value_at(i) == 0.0);
}

TEST_CASE("two-value volume z-scores to -1/+1") {
    std::vector<float> vals(512);
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = i < 256 ? 0.0f : 10.0f;
    Volume v = volume_from_values({8, 8, 8}, vals);
    auto [out, stats] = intensity_normalize(v);
    CHECK(!stats.degenerate);
    CHECK(stats.mean == doctest::Approx(5.0));
    CHECK(stats.stddev == doctest::Approx(5.0));
    for (std::int64_t i = 0; i < out.voxel_count(); ++i)
        CHECK(std::fabs(std::fabs(out.value_at(i)) - 1.0) < 1e-6);
}

TEST_CASE("output has mean 0 and stddev 1") {
    Volume v = random_test_volume({6, 6, 6}, Datatype::U16, 8);
    auto [out, stats] = intensity_normalize(v);
    auto [mean, sd] = mean_std(out);
    CHECK(std::fabs(mean) < 1e-5);
    CHECK(std::fabs(sd - 1.0) < 1e-5);
}

TEST_CASE("invariant under affine input transforms") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<float> val(-50.0f, 150.0f);
    std::vector<float> vals(216);
    for (auto& x : vals) x = val(rng);
    std::vector<float> affine(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) affine[i] = 2.0f * vals[i] + 7.0f;

    auto [a, sa] = intensity_normalize(volume_from_values({6, 6, 6}, vals));
    auto [b, sb] = intensity_normalize(volume_from_values({6, 6, 6}, affine));
    for (std::int64_t i = 0; i < a.voxel_count(); ++i)
        CHECK(std::fabs(a.value_at(i) - b.value_at(i)) < 1e-5);
}

TEST_CASE("percentile clamp trims outliers") {
    std::vector<float> vals(1000, 10.0f);
    for (int i = 0; i < 500; ++i) vals[i] = 20.0f;
    vals[0] = 1.0e6f; // single spike, beyond the 99.5 percentile
    Volume v = volume_from_values({10, 10, 10}, vals);
    auto [out, stats] = intensity_normalize(v);
    CHECK(stats.p_high < 1.0e6);
    double top = 0.0;
    for (std::int64_t i = 0; i < out.voxel_count(); ++i)
        top = std::max(top, out.value_at(i));
    CHECK(top < 5.0); // spike clamped, not 100 sigma away
}

TEST_CASE("min-max rescale maps onto [0,1]") {
    Volume v = random_test_volume({5, 5, 5}, Datatype::U8, 12);
    auto [out, stats] = intensity_normalize(v, /*minmax_rescale=*/true);
    double lo = 1e9, hi = -1e9;
    for (std::int64_t i = 0; i < out.voxel_count(); ++i) {
        lo = std::min(lo, out.value_at(i));
        hi = std::max(hi, out.value_at(i));
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(hi > 0.9); // full range reached after clamping
}
