#include <catch_amalgamated.hpp>

#include <mzvlab/core_indices.hpp>

using namespace mzvlab;

TEST_CASE("slices follow the open/closed position convention") {
    MultiIndex k{5, 7, 9};
    CHECK(slice(k, SliceRange::closed(1, 2)) == MultiIndex{5, 7});
    CHECK(slice(k, SliceRange::open(0, 1)).empty());
    CHECK(slice(MultiIndex{2, 1, 3}, SliceRange::open_closed(1, 3)) == MultiIndex{1, 3});
    CHECK(slice(k, SliceRange::closed_open(1, 4)) == k);
    CHECK_THROWS_AS(slice(k, SliceRange::closed(2, 1)), RangeError);
    CHECK_THROWS_AS(slice(k, SliceRange::closed(0, 5)), RangeError);
}

TEST_CASE("head and tail split at every j") {
    MultiIndex k{3, 1, 4, 1};
    for (int j = 0; j <= k.depth(); ++j) CHECK(head(k, j).concat(tail(k, j)) == k);
}

TEST_CASE("reverse, weight and depth") {
    CHECK(reverse(MultiIndex{1, 2, 3}) == MultiIndex{3, 2, 1});
    CHECK(reverse(MultiIndex{}).empty());
    CHECK(reverse(reverse(MultiIndex{4, 1})) == MultiIndex{4, 1});
    CHECK(weight_depth(MultiIndex{1, 2}) == WeightDepth{3, 2});
    CHECK(weight_depth(MultiIndex{}) == WeightDepth{0, 0});
    CHECK(weight_depth(MultiIndex::repeated(1, 5)) == WeightDepth{5, 5});
}

TEST_CASE("admissibility is about the last part") {
    CHECK(MultiIndex{1, 2}.admissible());
    CHECK_FALSE(MultiIndex{2, 1}.admissible());
    CHECK(MultiIndex{}.admissible());
    CHECK(convergent(MultiIndex{2, 1}, ColorVector(2, {0, 1})));
    CHECK_FALSE(convergent(MultiIndex{2, 1}, ColorVector(2, {1, 0})));
}

TEST_CASE("index parser reports the failing position") {
    CHECK(parse_index("2,1,3") == MultiIndex{2, 1, 3});
    CHECK(parse_index("").empty());
    CHECK(parse_index("()").empty());
    try {
        parse_index("2,x");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 2);
    }
    CHECK_THROWS_AS(parse_index("2,0"), ParseError);
}

TEST_CASE("color vectors reduce exponents modulo the level") {
    ColorVector c = parse_colors("1,-1,5@4");
    CHECK(c.level() == 4);
    CHECK(c.exps() == std::vector<int>{1, 3, 1});
    CHECK(c.product() == 1);
    CHECK(c.inverse().exps() == std::vector<int>{3, 1, 3});
    CHECK(c.reversed().exps() == std::vector<int>{1, 3, 1});
    CHECK(ColorVector::trivial(3, 2).is_trivial());
    CHECK_THROWS_AS(parse_colors("1,2"), ParseError);
}

TEST_CASE("weak compositions are counted by binomials") {
    for (int r = 0; r <= 4; ++r)
        for (int m = 0; m <= 6; ++m) {
            long count = 0;
            for_each_composition(m, r, [&](const std::vector<int>& n) {
                int s = 0;
                for (int x : n) s += x;
                CHECK(s == m);
                ++count;
            });
            long want = r == 0 ? (m == 0) : 1;
            if (r > 0)
                for (int i = 1; i < r; ++i) want = want * (m + i) / i;
            CHECK(count == want);
        }
}

TEST_CASE("indices of a given weight are the compositions of that weight") {
    for (int w = 1; w <= 8; ++w) {
        auto all = indices_of_weight(w, w);
        CHECK(all.size() == (std::size_t{1} << (w - 1)));
        for (const auto& k : all) CHECK(k.weight() == w);
    }
    for (const auto& k : indices_of_weight(6, 3)) CHECK(k.depth() <= 3);
    CHECK(indices_of_weight(6, 3).size() == 16);
}
