#include "oracle.hpp"

#include "topent/schedule.hpp"
#include "topent/symbolic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace topent;

TEST_SUITE("schedule") {

TEST_CASE("rational targets repeat the reduced fraction") {
  const BlockSchedule s = build_schedule(Rational(2, 5), 4);
  CHECK(s.pairs == std::vector<BlockPair>{{2, 5}, {4, 10}, {6, 15}, {8, 20}});
  CHECK(check_schedule(s).empty());
  CHECK(build_schedule(Rational(4, 10), 4) == s);
  const BlockSchedule one = build_schedule(Rational(1), 3);
  CHECK(one.pairs == std::vector<BlockPair>{{1, 1}, {2, 2}, {3, 3}});
}

TEST_CASE("frozen coordinates lead each block") {
  const BlockSchedule s = build_schedule(Rational(2, 5), 3);
  // blocks of 5: three frozen, then two free
  const std::vector<bool> free = {false, false, false, true, true, false, false, false, true, true};
  for (std::size_t i = 0; i < free.size(); ++i) CHECK(is_free_coordinate(s, i) == free[i]);
  CHECK(free_coordinates(s, 4) == 1);
  CHECK(free_coordinates(s, 10) == 4);
  CHECK(free_coordinates(s, 23) == 8);  // past the last pair the final block repeats
}

TEST_CASE("free coordinate counts agree with the block oracle") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    const auto b = static_cast<std::int64_t>(1 + rng() % 30);
    const auto a = static_cast<std::int64_t>(1 + rng() % static_cast<std::uint64_t>(b));
    const BlockSchedule s = build_schedule(Rational(a, b), 1 + rng() % 5);
    std::uint64_t free = 0;
    for (std::uint64_t i = 0; i < 200; ++i) {
      CHECK(free_coordinates(s, i) == free);
      const bool f = !oracle::frozen_coordinate(s, i);
      CHECK(is_free_coordinate(s, i) == f);
      free += f;
    }
  }
}

TEST_CASE("every pair condition holds on rational grids") {
  for (std::int64_t b = 1; b <= 20; ++b)
    for (std::int64_t a = 1; a <= b; ++a) {
      const BlockSchedule s = build_schedule(Rational(a, b), 8);
      INFO(a, "/", b);
      for (std::size_t i = 0; i < s.pairs.size(); ++i) {
        const auto& cur = s.pairs[i];
        CHECK(cur.p <= cur.q);
        CHECK(cur.p * b <= cur.q * a);
        if (i > 0) {
          const auto& prev = s.pairs[i - 1];
          CHECK(prev.p < cur.p);
          CHECK(prev.q < cur.q);
          CHECK(cur.q - prev.q >= cur.p - prev.p);
          CHECK(prev.p * cur.q <= cur.p * prev.q);
        }
      }
      CHECK(check_schedule(s).empty());
    }
}

TEST_CASE("irrational targets approach from below") {
  const double r = std::sqrt(2.0) / 2.0;
  const BlockSchedule s = build_schedule(r, 30);
  CHECK(check_schedule(s).empty());
  double prev = 0.0;
  for (const auto& pair : s.pairs) {
    const double ratio = double(pair.p) / double(pair.q);
    CHECK(ratio <= r);
    CHECK(ratio >= prev);
    prev = ratio;
  }
  CHECK(r - prev < 1e-9);
  // a short schedule has not converged yet
  CHECK_FALSE(check_schedule(build_schedule(r, 2)).empty());
}

TEST_CASE("invalid targets are rejected") {
  CHECK_THROWS_AS(build_schedule(0.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(1.5, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(Rational(3, 2), 3), std::invalid_argument);
  BlockSchedule bad = build_schedule(Rational(1, 2), 3);
  bad.pairs[1] = {5, 6};
  CHECK_FALSE(check_schedule(bad).empty());
}

TEST_CASE("covering schedules reach the requested length") {
  for (std::uint64_t n : {1u, 7u, 40u, 333u}) {
    const BlockSchedule s = build_schedule_covering(Rational(3, 7), n);
    CHECK(s.pairs.back().q >= n);
    CHECK(check_schedule(s).empty());
  }
}

TEST_CASE("schedule sets count k^p at each q") {
  const BlockSchedule s = build_schedule(Rational(3, 7), 5);
  const SeqSetExpr e = schedule_to_seqset(s, 3, 1);
  for (const auto& pair : s.pairs) CHECK(count_prefixes(e, pair.q) == ipow(3, pair.p));
  CHECK(prefixes(e, 4).words == std::vector<Word>{{1, 1, 1, 1}});
}

}  // TEST_SUITE
