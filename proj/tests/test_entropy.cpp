#include "topent/entropy.hpp"
#include "topent/schedule.hpp"

#include <doctest.h>

#include <cmath>

using namespace topent;

namespace {
const double kLog2 = std::log(2.0), kLog3 = std::log(3.0);

double exact(const SeqSetExpr& e) {
  const auto v = entropy_exact(e);
  REQUIRE(v.has_value());
  return v->value;
}
}  // namespace

TEST_SUITE("entropy") {

TEST_CASE("closed forms") {
  CHECK(exact(full_shift(3)) == doctest::Approx(kLog3).epsilon(1e-15));
  CHECK(exact(ev_const(2, 1)) == doctest::Approx(kLog2));
  CHECK(exact(full_shift(1)) == 0.0);
  CHECK(exact(finite_set(3, {{{0}, {1, 2}}, {{}, {2}}})) == 0.0);
  CHECK(exact(sr_set(3, Rational(2, 5))) == doctest::Approx(0.4 * kLog3).epsilon(1e-12));
  CHECK(exact(dilate(3, full_shift(2))) == doctest::Approx(kLog2 / 3));
  CHECK(exact(block(3, full_shift(2))) == doctest::Approx(3 * kLog2));
  CHECK(exact(unite(sr_set(2, Rational(1, 3)), sr_set(2, Rational(1, 2)))) == doctest::Approx(0.5 * kLog2));
  CHECK(exact(disjoint_union(full_shift(2), full_shift(3))) == doctest::Approx(kLog3));
  CHECK(exact(closure(sr_set(2, Rational(1, 4)))) == doctest::Approx(0.25 * kLog2));
  CHECK(exact(orbit(FiniteMap{{1, 2, 0}})) == 0.0);
}

TEST_CASE("golden mean entropy is the log of the spectral radius") {
  const TransitionRelation golden{{{0, 1}, {0}}};
  const double phi = (1 + std::sqrt(5.0)) / 2;
  CHECK(log_spectral_radius(golden) == doctest::Approx(std::log(phi)).epsilon(1e-12));
  CHECK(exact(orbit_sv(golden)) == doctest::Approx(std::log(phi)).epsilon(1e-12));
  CHECK(log_spectral_radius(TransitionRelation{{{0, 1, 2}, {0, 1, 2}, {0, 1, 2}}}) == doctest::Approx(kLog3));
}

TEST_CASE("estimators on count series") {
  const CountSeries full = count_series(full_shift(2), 12);
  REQUIRE(full.entries.size() == 12);
  CHECK(full.check().empty());
  auto est = entropy_estimate(full, {EstimateMode::tail_max, 0, 12});
  CHECK(est.value == doctest::Approx(kLog2));
  CHECK(est.window == 4);
  est = entropy_estimate(full, {EstimateMode::regression, 0, 12});
  CHECK(est.value == doctest::Approx(kLog2));

  // sr(2, 1/2): counts 1, 2, 2, 4, ... ; tail-max sees the block ends
  const CountSeries sr = count_series(sr_set(2, Rational(1, 2)), 24);
  est = entropy_estimate(sr, {EstimateMode::tail_max, 0, 24});
  CHECK(est.value == doctest::Approx(0.5 * kLog2));
  CHECK(std::abs(entropy_estimate(sr, {EstimateMode::regression, 0, 24}).value - 0.5 * kLog2) < 0.03);
}

TEST_CASE("estimates are clamped to [0, log k]") {
  CountSeries s;
  s.alphabet_size = 2;
  s.entries = {{1, Count(2)}, {2, Count(4)}, {3, Count(8)}};
  const auto est = entropy_estimate(s, {EstimateMode::regression, 2, 3});
  CHECK(est.value <= kLog2 + 1e-15);
  CHECK_THROWS_AS(entropy_estimate(CountSeries{}), std::invalid_argument);
  CHECK_THROWS_AS(entropy_estimate(s, {EstimateMode::exact, 0, 3}), std::invalid_argument);
}

TEST_CASE("malformed series are reported") {
  CountSeries s;
  s.entries = {{2, Count(4)}, {1, Count(2)}};
  CHECK_FALSE(s.check().empty());
  s.entries = {{1, Count(0)}};
  CHECK_FALSE(s.check().empty());
}

TEST_CASE("the k-symbol subspaces give an unbounded sequence") {
  const DivergenceWitness w = divergence_witness(6);
  REQUIRE(w.rows.size() == 6);
  for (std::size_t i = 0; i < w.rows.size(); ++i) {
    CHECK(w.rows[i].first == i + 1);
    CHECK(w.rows[i].second == doctest::Approx(std::log(double(i + 1))));
  }
  CHECK(std::isinf(w.limit.value));
}

TEST_CASE("mode names") {
  CHECK(parse_estimate_mode("tail-max") == EstimateMode::tail_max);
  CHECK(parse_estimate_mode("regression") == EstimateMode::regression);
  CHECK_FALSE(parse_estimate_mode("median").has_value());
  CHECK(std::string(to_string(EstimateMode::exact)) == "exact");
}

}  // TEST_SUITE
