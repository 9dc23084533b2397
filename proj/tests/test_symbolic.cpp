#include "oracle.hpp"

#include "topent/checks.hpp"
#include "topent/dsl.hpp"
#include "topent/symbolic.hpp"

#include <doctest.h>

#include <random>

using namespace topent;

TEST_SUITE("symbolic") {

TEST_CASE("full shift and eventually constant sets have k^n prefixes") {
  for (std::uint32_t k = 1; k <= 4; ++k)
    for (std::size_t n = 0; n <= 6; ++n) {
      CHECK(count_prefixes(full_shift(k), n) == ipow(k, n));
      CHECK(count_prefixes(ev_const(k, k - 1), n) == ipow(k, n));
      CHECK(prefixes(ev_const(k, 0), n).size() == ipow(k, n));
    }
}

TEST_CASE("prefix sets are sorted and have the requested length") {
  const auto s = prefixes(full_shift(3), 3);
  CHECK(s.length == 3);
  CHECK(std::is_sorted(s.words.begin(), s.words.end()));
  CHECK(s.words.front() == Word{0, 0, 0});
  CHECK(s.words.back() == Word{2, 2, 2});
  CHECK(s.contains(Word{1, 2, 0}));
  CHECK_FALSE(s.contains(Word{1, 2}));
}

TEST_CASE("length zero has the empty word only") {
  CHECK(count_prefixes(sr_set(3, Rational(1, 2)), 0) == 1);
  CHECK(prefixes(orbit(FiniteMap{{1, 0}}), 0).words == std::vector<Word>{Word{}});
}

TEST_CASE("finite sets count distinct prefixes") {
  const auto e = finite_set(2, {{{}, {0}}, {{}, {1}}, {{0}, {1}}});
  CHECK(count_prefixes(e, 1) == 2);
  CHECK(count_prefixes(e, 2) == 3);
  CHECK(count_prefixes(e, 10) == 3);
}

TEST_CASE("cyclic shift orbit on three symbols") {
  const auto e = orbit(FiniteMap{{1, 2, 0}});
  for (std::size_t n = 1; n <= 8; ++n) CHECK(count_prefixes(e, n) == 3);
  CHECK(prefixes(e, 3).words == std::vector<Word>{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
}

TEST_CASE("golden mean relation counts are Fibonacci numbers") {
  const auto e = orbit_sv(TransitionRelation{{{0, 1}, {0}}});
  std::size_t a = 2, b = 3;  // n = 1, 2
  CHECK(count_prefixes(e, 1) == a);
  for (std::size_t n = 2; n <= 30; ++n) {
    CHECK(count_prefixes(e, n) == b);
    const std::size_t c = a + b;
    a = b;
    b = c;
  }
}

TEST_CASE("cylinder schedules multiply coordinate sizes") {
  const auto e = cyl_sched(3, SubsetSequence{{{0, 1, 2}}, {{0, 1}, {2}}});
  // sizes 3, 2, 1, 2, 1, ...
  CHECK(count_prefixes(e, 1) == 3);
  CHECK(count_prefixes(e, 2) == 6);
  CHECK(count_prefixes(e, 3) == 6);
  CHECK(count_prefixes(e, 4) == 12);
  CHECK(count_prefixes(e, 5) == 12);
}

TEST_CASE("sr sets reach k^p at each block end") {
  const BlockSchedule s = build_schedule(Rational(2, 5), 6);
  const auto e = sr_set(3, Rational(2, 5));
  for (const auto& pair : s.pairs) CHECK(count_prefixes(e, pair.q) == ipow(3, pair.p));
}

TEST_CASE("dilation, restriction and blocking") {
  const auto base = orbit(FiniteMap{{1, 2, 0}});
  CHECK(prefixes(dilate(2, base), 3).words.front() == Word{0, 0, 1});
  CHECK(count_prefixes(dilate(3, full_shift(2)), 7) == 8);  // ceil(7/3) = 3 free symbols
  CHECK(count_prefixes(restriction(2, full_shift(2)), 4) == 16);
  CHECK(prefixes(restriction(2, base), 3).words == std::vector<Word>{{0, 2, 1}, {1, 0, 2}, {2, 1, 0}});
  const auto b = block(2, full_shift(2));
  CHECK(b.alphabet_size() == 4);
  CHECK(count_prefixes(b, 3) == 64);
  CHECK(prefixes(block(2, base), 2).words == std::vector<Word>{{1, 6}, {5, 1}, {6, 5}});
}

TEST_CASE("shift drops leading coordinates") {
  const auto e = shift(2, finite_set(2, {{{0, 0}, {1}}, {{1, 1, 0}, {0}}}));
  CHECK(prefixes(e, 2).words == std::vector<Word>{{0, 0}, {1, 1}});
}

TEST_CASE("union, disjoint union, product and image") {
  const auto a = finite_set(2, {{{}, {0}}});
  const auto b = finite_set(2, {{{}, {1}}, {{}, {0}}});
  CHECK(count_prefixes(unite(a, b), 4) == 2);
  const auto dj = disjoint_union(a, b);
  CHECK(dj.alphabet_size() == 4);
  CHECK(prefixes(dj, 2).words == std::vector<Word>{{0, 0}, {2, 2}, {3, 3}});
  const auto p = product(full_shift(2), orbit(FiniteMap{{1, 2, 0}}));
  CHECK(p.alphabet_size() == 6);
  CHECK(count_prefixes(p, 5) == 32 * 3);
  const auto img = image(SymbolMap{{0, 0, 1}, 2}, full_shift(3));
  CHECK(count_prefixes(img, 5) == 32);
  CHECK(count_prefixes(image(SymbolMap{{0, 0}, 1}, full_shift(2)), 5) == 1);
}

TEST_CASE("validation reports malformed expressions") {
  CHECK(validate(full_shift(2)).empty());
  CHECK_FALSE(validate(full_shift(0)).empty());
  CHECK_FALSE(validate(ev_const(2, 2)).empty());
  CHECK_FALSE(validate(dilate(1, full_shift(2))).empty());
  CHECK_FALSE(validate(unite(full_shift(2), full_shift(3))).empty());
  CHECK_FALSE(validate(orbit(FiniteMap{{0, 3}})).empty());
  CHECK_FALSE(validate(orbit_sv(TransitionRelation{{{0}, {}}})).empty());
  CHECK_FALSE(validate(image(SymbolMap{{0, 1}, 3}, full_shift(3))).empty());
  CHECK_FALSE(validate(sr_set(2, Rational(3, 2))).empty());
  CHECK_THROWS_AS(prefixes(full_shift(0), 2), std::invalid_argument);
}

TEST_CASE("materialization honours the budget") {
  CHECK_THROWS_AS(prefixes(full_shift(4), 10, Budget{1000}), BudgetExceeded);
  CHECK(count_prefixes(full_shift(4), 40, Budget{1000}) == ipow(4, 40));  // closed form
  CHECK_THROWS_AS(count_prefixes(shift(1, full_shift(4)), 10, Budget{1000}), BudgetExceeded);
}

TEST_CASE("structural equality and depth") {
  CHECK(dilate(2, full_shift(2)) == dilate(2, full_shift(2)));
  CHECK_FALSE(dilate(2, full_shift(2)) == dilate(3, full_shift(2)));
  CHECK(depth(full_shift(2)) == 1);
  CHECK(depth(unite(shift(1, full_shift(2)), full_shift(2))) == 3);
}

TEST_CASE("prefix sets agree with the membership oracle on random expressions") {
  std::mt19937_64 rng(17);
  std::size_t compared = 0;
  for (int i = 0; i < 300; ++i) {
    const auto k = static_cast<std::uint32_t>(1 + rng() % 3);
    const SeqSetExpr e = checks::random_expr(rng, k, 3);
    const std::size_t n = 1 + rng() % 4;
    if (ipow(k, n) > 200) continue;
    PrefixSet got;
    try {
      got = prefixes(e, n, Budget{1 << 16});
    } catch (const BudgetExceeded&) {
      continue;
    }
    const auto want = oracle::prefixes(e, n);
    INFO(dsl::print(e), " n=", n);
    CHECK(got.words == want);
    CHECK(count_prefixes(e, n, Budget{1 << 16}) == want.size());
    ++compared;
  }
  CHECK(compared > 150);
}

}  // TEST_SUITE
