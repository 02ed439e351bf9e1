#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sforest/clustering.hpp"
#include "sforest/errors.hpp"
#include "sforest/rng.hpp"

using namespace sforest;

namespace {

std::function<double(int, int)> euclid_1d(const std::vector<double>& xs) {
    return [xs](int i, int j) {
        return std::abs(xs[static_cast<std::size_t>(i)] - xs[static_cast<std::size_t>(j)]);
    };
}

}  // namespace

TEST_CASE("complete linkage on a collinear triple") {
    const Dendrogram z = agglomerate(3, euclid_1d({0, 1, 10}), Linkage::complete);
    REQUIRE(z.merges.size() == 2);
    CHECK(z.merges[0].left == 0);
    CHECK(z.merges[0].right == 1);
    CHECK(z.merges[0].height == doctest::Approx(1.0));
    CHECK(z.merges[1].height == doctest::Approx(10.0));  // farthest distance
}

TEST_CASE("single item produces no merges") {
    const Dendrogram z = agglomerate(1, [](int, int) { return 0.0; }, Linkage::complete);
    CHECK(z.leaf_count == 1);
    CHECK(z.merges.empty());
}

TEST_CASE("equal distances merge in id order") {
    const auto flat = [](int i, int j) { return i == j ? 0.0 : 2.5; };
    const Dendrogram z = agglomerate(4, flat, Linkage::complete);
    REQUIRE(z.merges.size() == 3);
    CHECK(z.merges[0].left == 0);
    CHECK(z.merges[0].right == 1);
    CHECK(z.merges[1].left == 2);
    CHECK(z.merges[1].right == 3);
    CHECK(z.merges[2].left == 4);
    CHECK(z.merges[2].right == 5);
}

TEST_CASE("asymmetric and negative distances are rejected") {
    const auto asym = [](int i, int j) { return i < j ? 1.0 : 2.0; };
    CHECK_THROWS_AS(agglomerate(3, asym, Linkage::complete), ValidationError);
    const auto neg = [](int i, int j) { return i == j ? 0.0 : -1.0; };
    CHECK_THROWS_AS(agglomerate(3, neg, Linkage::single), ValidationError);
    CHECK_THROWS_AS(agglomerate(0, asym, Linkage::complete), ValidationError);
}

TEST_CASE("merge heights never decrease") {
    Xoshiro256StarStar rng(21, 0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<Point2> pts;
        for (int i = 0; i < 12; ++i) pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
        for (Linkage lk : {Linkage::complete, Linkage::single}) {
            const Dendrogram z = agglomerate(
                12,
                [&](int i, int j) {
                    return distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
                },
                lk);
            for (std::size_t k = 1; k < z.merges.size(); ++k)
                CHECK(z.merges[k].height >= z.merges[k - 1].height);
        }
    }
}

TEST_CASE("single linkage reproduces MST merge heights") {
    Xoshiro256StarStar rng(33, 0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<Point2> pts;
        for (int i = 0; i < 10; ++i) pts.push_back({rng.uniform(0, 50), rng.uniform(0, 50)});
        const Dendrogram z = agglomerate(
            10,
            [&](int i, int j) {
                return distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
            },
            Linkage::single);
        std::vector<double> heights;
        for (const auto& m : z.merges) heights.push_back(m.height);
        std::sort(heights.begin(), heights.end());
        const std::vector<double> mst = oracles::prim_mst_edges(pts);
        REQUIRE(heights.size() == mst.size());
        for (std::size_t i = 0; i < mst.size(); ++i)
            CHECK(heights[i] == doctest::Approx(mst[i]).epsilon(1e-12));
    }
}

TEST_CASE("cut_to_modules corner cases") {
    const Dendrogram z = agglomerate(3, euclid_1d({0, 1, 10}), Linkage::complete);

    const ClusterCut own = cut_to_modules(z, 3);
    CHECK(own.module_count == 3);
    CHECK(own.assignment == std::vector<int>{0, 1, 2});

    const ClusterCut one = cut_to_modules(z, 1);
    CHECK(one.module_count == 1);
    CHECK(one.assignment == std::vector<int>{0, 0, 0});

    const ClusterCut two = cut_to_modules(z, 2);
    CHECK(two.module_count == 2);
    CHECK(two.assignment[0] == two.assignment[1]);
    CHECK(two.assignment[0] != two.assignment[2]);

    CHECK_THROWS_AS(cut_to_modules(z, 0), ValidationError);
}

TEST_CASE("cut module count is bounded by s and monotone in s") {
    Xoshiro256StarStar rng(44, 0);
    std::vector<Point2> pts;
    for (int i = 0; i < 16; ++i) pts.push_back({rng.uniform(0, 100), rng.uniform(0, 100)});
    const Dendrogram z = agglomerate(
        16,
        [&](int i, int j) {
            return distance(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
        },
        Linkage::complete);
    int prev = 0;
    for (int s = 1; s <= 16; ++s) {
        const ClusterCut cut = cut_to_modules(z, s);
        CHECK(cut.module_count <= s);
        CHECK(cut.module_count >= prev);
        prev = cut.module_count;
    }
}

TEST_CASE("condense_above_cut preserves the remaining merge structure") {
    const Dendrogram z = agglomerate(4, euclid_1d({0, 1, 5, 6}), Linkage::complete);
    // Merges: (0,1)@1, (2,3)@1, then everything @6.
    const ClusterCut cut = cut_to_modules(z, 2);
    REQUIRE(cut.module_count == 2);
    const Dendrogram zm = condense_above_cut(z, cut);
    CHECK(zm.leaf_count == 2);
    REQUIRE(zm.merges.size() == 1);
    CHECK(zm.merges[0].left == 0);
    CHECK(zm.merges[0].right == 1);
    CHECK(zm.merges[0].height == doctest::Approx(6.0));

    const ClusterCut all = cut_to_modules(z, 4);
    const Dendrogram zall = condense_above_cut(z, all);
    CHECK(zall.leaf_count == 4);
    CHECK(zall.merges.size() == 3);

    const ClusterCut single = cut_to_modules(z, 1);
    const Dendrogram zone = condense_above_cut(z, single);
    CHECK(zone.leaf_count == 1);
    CHECK(zone.merges.empty());
}

TEST_CASE("path_distance hand values") {
    const Point2 root{0, 0};
    const GeodesicPath u{{{0, 0}, {1, 0}}, 1.0};
    const GeodesicPath v{{{0, 0}, {0, 1}}, 1.0};

    CHECK(path_distance(u, u, root, {2}) == 0.0);

    // NP=2: gap = |(1,0)-(0,1)|^2 = 2, angle = pi/2, d = pi.
    CHECK(path_distance(u, v, root, {2}) == doctest::Approx(3.14159265358979312).epsilon(1e-12));

    // NP=3 adds the midpoint gap 0.5: d = 2.5 * pi/2.
    CHECK(path_distance(u, v, root, {3}) == doctest::Approx(3.92699081698724139).epsilon(1e-12));
}

TEST_CASE("path_distance is symmetric and nonnegative") {
    Xoshiro256StarStar rng(55, 0);
    const Point2 root{5, 5};
    for (int rep = 0; rep < 50; ++rep) {
        GeodesicPath u{{root}, 0.0};
        GeodesicPath v{{root}, 0.0};
        for (int k = 0; k < 3; ++k) {
            u.waypoints.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
            v.waypoints.push_back({rng.uniform(0, 10), rng.uniform(0, 10)});
        }
        const double duv = path_distance(u, v, root, {7});
        const double dvu = path_distance(v, u, root, {7});
        CHECK(duv >= 0.0);
        CHECK(duv == doctest::Approx(dvu).epsilon(1e-12));
    }
}

TEST_CASE("collinear same-direction paths have zero similarity") {
    // Known degeneracy of the metric: the angle term vanishes.
    const Point2 root{0, 0};
    const GeodesicPath u{{{0, 0}, {1, 0}}, 1.0};
    const GeodesicPath v{{{0, 0}, {2, 0}}, 2.0};
    CHECK(path_distance(u, v, root, {5}) == 0.0);
}

TEST_CASE("path_distance validates its inputs") {
    const Point2 root{0, 0};
    const GeodesicPath u{{{0, 0}, {1, 0}}, 1.0};
    const GeodesicPath at_root{{{0, 0}, {0, 0}}, 0.0};
    CHECK_THROWS_AS(path_distance(u, at_root, root, {2}), ValidationError);
    const GeodesicPath elsewhere{{{3, 3}, {4, 4}}, 1.4142135623730951};
    CHECK_THROWS_AS(path_distance(u, elsewhere, root, {2}), ValidationError);
}
