#include <catch_amalgamated.hpp>

#include <mzvlab/sweeps.hpp>
#include <mzvlab/word_algebra.hpp>

using namespace mzvlab;

namespace {

StuffleWord Y(const char* s) { return *parse_word(std::string("y:") + s).y; }
ShuffleWord X(const char* s) { return *parse_word(std::string("x:") + s).x; }

template <class L>
WordPoly<L> P(std::initializer_list<std::pair<Word<L>, long>> terms, int level = 1) {
    WordPoly<L> p(level);
    for (const auto& [w, c] : terms) p.add(w, c);
    return p;
}

} // namespace

TEST_CASE("stuffle products") {
    CHECK(stuffle(Y("2"), Y("1")) == P<YLetter>({{Y("1,2"), 1}, {Y("2,1"), 1}, {Y("3"), 1}}));
    CHECK(stuffle(Y("1"), Y("1")) == P<YLetter>({{Y("1,1"), 2}, {Y("2"), 1}}));
    CHECK(stuffle(StuffleWord{}, Y("3,1")) == WordPoly<YLetter>(Y("3,1")));
    // Colors add in the merged letter.
    auto c = stuffle(StuffleWord{{1, 1}}, StuffleWord{{2, 1}}, 2);
    CHECK(c.coefficient(StuffleWord{{3, 0}}) == 1);
}

TEST_CASE("shuffle products") {
    CHECK(shuffle(X("1"), X("1")) == P<XLetter>({{X("1,1"), 2}}));
    CHECK(shuffle(X("1"), X("1,0")) == P<XLetter>({{X("1,1,0"), 2}, {X("1,0,1"), 1}}));
    CHECK(shuffle(ShuffleWord{}, X("1,0,1")) == WordPoly<XLetter>(X("1,0,1")));
}

TEST_CASE("products across levels are rejected") {
    WordPoly<YLetter> a(Y("1"), 1), b(Y("1"), 2);
    CHECK_THROWS_AS(stuffle(a, b), LevelError);
}

TEST_CASE("stuffle decomposition peels trailing y1") {
    auto d1 = stuffle_decompose(Y("1"));
    REQUIRE(d1.size() == 2);
    CHECK(d1[0].empty());
    CHECK(d1[1] == WordPoly<YLetter>(StuffleWord{}));

    auto d21 = stuffle_decompose(Y("2,1"));
    REQUIRE(d21.size() == 2);
    CHECK(d21[0] == P<YLetter>({{Y("1,2"), -1}, {Y("3"), -1}}));
    CHECK(d21[1] == WordPoly<YLetter>(Y("2")));

    auto d11 = stuffle_decompose(Y("1,1"));
    REQUIRE(d11.size() == 3);
    CHECK(d11[0] == WordPoly<YLetter>(Y("2"), 1, make_rational(-1, 2)));
    CHECK(d11[1].empty());
    CHECK(d11[2] == WordPoly<YLetter>(StuffleWord{}, 1, make_rational(1, 2)));
}

TEST_CASE("shuffle decomposition peels trailing x1") {
    auto d = shuffle_decompose(X("1"));
    REQUIRE(d.size() == 2);
    CHECK(d[1] == WordPoly<XLetter>(ShuffleWord{}));

    auto d101 = shuffle_decompose(X("1,0,1"));
    REQUIRE(d101.size() == 2);
    CHECK(d101[0] == WordPoly<XLetter>(X("1,1,0"), 1, -2));
    CHECK(d101[1] == WordPoly<XLetter>(X("1,0")));

    auto d11 = shuffle_decompose(X("1,1"));
    REQUIRE(d11.size() == 3);
    CHECK(d11[0].empty());
    CHECK(d11[2] == WordPoly<XLetter>(ShuffleWord{}, 1, make_rational(1, 2)));
}

TEST_CASE("binary encoding") {
    CHECK(encode_binary(MultiIndex{1, 2}) == X("1,1,0"));
    CHECK(encode_binary(MultiIndex{2, 1}) == X("1,0,1"));
    CHECK(decode_binary(X("1,0,0")).first == MultiIndex{3});
    CHECK_THROWS_AS(decode_binary(X("0,1")), DecodeError);
    for (int w = 1; w <= 6; ++w)
        for (const auto& k : indices_of_weight(w, w)) CHECK(decode_binary(encode_binary(k)).first == k);
    ColorVector mu(4, {1, 3, 2});
    auto [k, back] = decode_binary(encode_binary(MultiIndex{2, 1, 3}, mu), 4);
    CHECK(k == MultiIndex{2, 1, 3});
    CHECK(back == mu);
}

TEST_CASE("word literal parser") {
    WordLiteral w = parse_word("y:2@1,1@3@N=4");
    REQUIRE(w.y);
    CHECK(w.level == 4);
    CHECK(*w.y == StuffleWord{{2, 1}, {1, 3}});
    CHECK_THROWS_AS(parse_word("z:1"), ParseError);
    try {
        parse_word("x:1,2");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.position() == 2);
    }
}

TEST_CASE("product laws on seeded polynomials") {
    AlgebraTally t = product_law_sweep(60, 6, 3);
    INFO(t.first_failure);
    CHECK(t.pass());
}

TEST_CASE("decomposition inverts exactly") {
    AlgebraTally t = decomposition_sweep(5);
    INFO(t.first_failure);
    CHECK(t.pass());
    for (const auto& w : {StuffleWord{{1, 1}, {1, 0}}, StuffleWord{{2, 1}, {1, 0}, {1, 0}}}) CHECK(stuffle_reconstruct(stuffle_decompose(w, 2), 2) == WordPoly<YLetter>(w, 2));
}
