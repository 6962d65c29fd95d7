#include <doctest.h>

#include <cstring>
#include <random>

#include "roivault/mask.hpp"
#include "roivault/nifti.hpp"
#include "test_util.hpp"

using namespace roivault;
using namespace testutil;

namespace {

LabelVolume labels_from(const std::vector<std::int64_t>& dims,
                        const std::vector<std::uint8_t>& labels) {
    return {dims, labels};
}

RoiMask random_mask(const std::vector<std::int64_t>& dims, std::uint64_t seed, double p = 0.5) {
    std::int64_t n = 1;
    for (auto d : dims) n *= d;
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution bit(p);
    std::vector<std::uint8_t> bits(n);
    for (auto& b : bits) b = bit(rng) ? 1 : 0;
    return RoiMask::from_bits(dims, std::move(bits));
}

} // namespace

TEST_CASE("merge_labels") {
    SUBCASE("all background") {
        auto m = merge_labels(labels_from({2, 2, 2}, std::vector<std::uint8_t>(8, 0)));
        CHECK(m.roi_count == 0);
    }
    SUBCASE("tissue labels 1..10 map to foreground") {
        std::vector<std::uint8_t> labels{0, 1, 5, 10, 0, 1, 5, 10};
        auto m = merge_labels(labels_from({2, 2, 2}, labels));
        for (std::size_t i = 0; i < labels.size(); ++i)
            CHECK(m.bits[i] == (labels[i] >= 1 && labels[i] <= 10 ? 1 : 0));
        CHECK(m.roi_count == 6);
    }
    SUBCASE("foreground absent from the volume") {
        auto m = merge_labels(labels_from({2, 2, 2}, std::vector<std::uint8_t>(8, 3)), {7});
        CHECK(m.roi_count == 0);
    }
    SUBCASE("empty foreground set rejected") {
        CHECK_THROWS_AS(
            merge_labels(labels_from({2, 2, 2}, std::vector<std::uint8_t>(8, 0)), {}),
            EmptyInput);
    }
}

TEST_CASE("foreground and background merges are complementary") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> lbl(0, 10);
    std::vector<std::uint8_t> labels(4 * 4 * 4);
    for (auto& l : labels) l = static_cast<std::uint8_t>(lbl(rng));
    auto lv = labels_from({4, 4, 4}, labels);
    auto fg = merge_labels(lv);
    auto bg = merge_labels(lv, {0});
    CHECK(fg.roi_count + bg.roi_count == 64);
}

TEST_CASE("load_mask") {
    RoiMask m = random_mask({4, 4, 2}, 1);
    auto file = serialize_nifti(mask_to_volume(m, {1, 1, 1}));
    SUBCASE("round trip with dim check") {
        RoiMask back = load_mask(file, {4, 4, 2});
        CHECK(back == m);
    }
    SUBCASE("wrong expected dims") {
        CHECK_THROWS_AS(load_mask(file, {4, 4, 3}), DimsMismatch);
    }
    SUBCASE("float mask binarizes on nonzero") {
        std::vector<float> vals{0.0f, 0.5f, 1.0f, 0.0f, -2.0f, 0.0f, 0.25f, 0.0f};
        std::vector<std::uint8_t> bytes(vals.size() * 4);
        std::memcpy(bytes.data(), vals.data(), bytes.size());
        Volume v = ingest_raw({2, 2, 2}, Datatype::F32, {1, 1, 1}, bytes);
        RoiMask fm = load_mask(serialize_nifti(v), {2, 2, 2});
        CHECK(fm.bits == std::vector<std::uint8_t>{0, 1, 1, 0, 1, 0, 1, 0});
    }
}

TEST_CASE("dice examples") {
    RoiMask m = random_mask({4, 4, 2}, 2);
    REQUIRE(m.roi_count > 0);
    CHECK(dice(m, m) == 1.0);

    // disjoint nonempty masks
    std::vector<std::uint8_t> a(8, 0), b(8, 0);
    a[0] = 1;
    b[7] = 1;
    CHECK(dice(RoiMask::from_bits({2, 2, 2}, a), RoiMask::from_bits({2, 2, 2}, b)) == 0.0);

    // |A|=10, |B|=10, |A∩B|=5
    std::vector<std::uint8_t> c(27, 0), d(27, 0);
    for (int i = 0; i < 10; ++i) c[i] = 1;
    for (int i = 5; i < 15; ++i) d[i] = 1;
    CHECK(dice(RoiMask::from_bits({3, 3, 3}, c), RoiMask::from_bits({3, 3, 3}, d)) == 0.5);

    // both empty: defined as perfect agreement
    CHECK(dice(RoiMask::from_bits({2, 2, 2}, std::vector<std::uint8_t>(8, 0)),
               RoiMask::from_bits({2, 2, 2}, std::vector<std::uint8_t>(8, 0))) == 1.0);

    CHECK_THROWS_AS(dice(random_mask({2, 2, 2}, 1), random_mask({2, 2, 1}, 1)), DimsMismatch);
}

TEST_CASE("dice properties on random masks") {
    for (int trial = 0; trial < 30; ++trial) {
        RoiMask a = random_mask({5, 4, 3}, 100 + trial, 0.3);
        RoiMask b = random_mask({5, 4, 3}, 200 + trial, 0.6);
        double d_ab = dice(a, b);
        CHECK(d_ab == dice(b, a)); // exact symmetry
        CHECK(d_ab >= 0.0);
        CHECK(d_ab <= 1.0);
        // voxel-enumeration oracle
        std::int64_t inter = 0;
        for (std::size_t i = 0; i < a.bits.size(); ++i)
            if (a.bits[i] == 1 && b.bits[i] == 1) ++inter;
        if (a.roi_count + b.roi_count > 0)
            CHECK(d_ab == 2.0 * double(inter) / double(a.roi_count + b.roi_count));
        if (a.roi_count > 0) CHECK((dice(a, b) == 1.0) == (a.bits == b.bits));
    }
}

TEST_CASE("synthetic_mask") {
    SUBCASE("extreme fractions") {
        CHECK(synthetic_mask({4, 4, 4}, 0.0, 1).roi_count == 0);
        CHECK(synthetic_mask({4, 4, 4}, 1.0, 1).roi_count == 64);
    }
    SUBCASE("exact count and determinism") {
        auto a = synthetic_mask({64, 64, 64}, 0.25, 9);
        CHECK(a.roi_count == 65536);
        auto b = synthetic_mask({64, 64, 64}, 0.25, 9);
        CHECK(a == b);
        auto c = synthetic_mask({64, 64, 64}, 0.25, 10);
        CHECK(c.roi_count == 65536);
        CHECK(a.bits != c.bits); // different seed jitters the center
    }
    SUBCASE("count is round(fraction * total)") {
        auto m = synthetic_mask({10, 10, 10}, 0.333, 3);
        CHECK(m.roi_count == 333);
    }
    SUBCASE("mask is contiguous, not salt-and-pepper") {
        auto m = synthetic_mask({16, 16, 16}, 0.2, 4);
        // centered ellipsoid: the center voxel is set, corners are not
        CHECK(m.bits[8 + 16 * (8 + 16 * 8)] == 1);
        CHECK(m.bits[0] == 0);
    }
}

TEST_CASE("RoiMask construction recomputes roi_count and binarizes") {
    std::vector<std::uint8_t> raw{0, 3, 1, 255, 0, 0, 1, 0};
    auto m = RoiMask::from_bits({2, 2, 2}, raw);
    CHECK(m.roi_count == 4);
    for (auto b : m.bits) CHECK((b == 0 || b == 1));
}
