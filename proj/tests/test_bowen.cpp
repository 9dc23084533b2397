#include "topent/bowen.hpp"
#include "topent/checks.hpp"
#include "topent/symbolic.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

using namespace topent;
using namespace topent::bowen;

namespace {

// Exhaustive counters over every subset.
std::size_t oracle_separated(const DistanceMatrix& d, double eps) {
  const std::size_t n = d.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1)) ok = d(i, j) >= eps;
    if (ok) best = std::max<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

std::size_t oracle_spanning(const DistanceMatrix& d, double eps, const std::vector<std::size_t>& targets,
                            const std::vector<std::size_t>& candidates) {
  std::size_t best = SIZE_MAX;
  for (std::uint32_t mask = 0; mask < (1u << candidates.size()); ++mask) {
    bool ok = true;
    for (std::size_t t : targets) {
      bool covered = false;
      for (std::size_t c = 0; c < candidates.size() && !covered; ++c)
        covered = (mask >> c & 1) && d(candidates[c], t) < eps;
      ok = ok && covered;
    }
    if (ok) best = std::min<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

DistanceMatrix line(std::vector<double> xs) {
  DistanceMatrix d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) d.at(i, j) = std::fabs(xs[i] - xs[j]);
  return d;
}

DistanceMatrix cycle5() {
  DistanceMatrix c(5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const std::size_t diff = i > j ? i - j : j - i;
      c.at(i, j) = double(std::min(diff, 5 - diff));
    }
  return c;
}

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

}  // namespace

TEST_SUITE("bowen") {

TEST_CASE("d_{n,p} on short sequences") {
  const std::vector<double> x = {0, 0}, y = {3, 4};
  CHECK(dnp(BaseMetric::euclidean(), x, y, 2, 2.0) == doctest::Approx(5.0));
  CHECK(dnp(BaseMetric::euclidean(), x, y, 2, 1.0) == 7.0);
  CHECK(dnp(BaseMetric::euclidean(), x, y, 2, kInfinity) == 4.0);
  CHECK(dnp(BaseMetric::euclidean(), x, y, 1, 2.0) == 3.0);
  CHECK(dnp(BaseMetric::discrete(), x, y, 2, 2.0) == doctest::Approx(std::sqrt(2.0)));
  const auto table = BaseMetric::from_table(2, {0, 0.5, 0.5, 0});
  CHECK(dnp(table, std::vector<double>{0, 1}, std::vector<double>{1, 1}, 2, kInfinity) == 0.5);
  CHECK_THROWS_AS(BaseMetric::from_table(2, {0, 1, 2, 0}), std::invalid_argument);
  CHECK_THROWS_AS(BaseMetric::from_table(3, {0, 1, 5, 1, 0, 1, 5, 1, 0}), std::invalid_argument);
}

TEST_CASE("four collinear points at eps 1.5") {
  const DistanceMatrix d = line({0, 1, 2, 3});
  CHECK(count_separated(d, 1.5).value == 2);
  CHECK(count_spanning_intrinsic(d, 1.5).value == 2);
  CHECK(count_separated(d, 1.0).value == 4);
  CHECK(count_separated(d, 3.5).value == 1);
}

TEST_CASE("counters agree with exhaustive search") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 150; ++t) {
    const auto rc = checks::random_cloud(rng, 9, 4);
    const auto kp = iota(rc.k_size), all = iota(rc.d.size());
    const DistanceMatrix dk = rc.d.restricted(kp);
    for (double eps : checks::critical_eps(dk)) {
      INFO(rc.description, " eps=", eps);
      const auto s = count_separated(dk, eps);
      CHECK(s.exact);
      CHECK(s.value == oracle_separated(dk, eps));
      CHECK(s.witness.size() == s.value);
      CHECK(count_spanning_intrinsic(dk, eps).value == oracle_spanning(dk, eps, kp, kp));
      CHECK(count_spanning(rc.d, eps, kp, all).value == oracle_spanning(rc.d, eps, kp, all));
      CHECK(count_spanning_ambient(rc.d, rc.k_size, eps).value == oracle_spanning(rc.d, eps, kp, all));
    }
  }
}

TEST_CASE("exact counting is capped") {
  const DistanceMatrix d = line(std::vector<double>(70, 0.0));
  CHECK_THROWS_AS(count_separated(d, 1.0, CountMode::exact), SizeCapExceeded);
  CHECK_THROWS_AS(count_separated(line({0, 1, 2}), 0.5, CountMode::exact, 2), SizeCapExceeded);
  CHECK(count_separated(d, 1.0, CountMode::greedy).value == 1);
}

TEST_CASE("spanning needs a covering candidate") {
  const DistanceMatrix d = line({0, 5});
  const std::vector<std::size_t> targets = {1}, candidates = {0};
  CHECK_THROWS_AS(count_spanning(d, 1.0, targets, candidates), std::invalid_argument);
}

TEST_CASE("intrinsic spanning is not monotone under enlarging K") {
  // {0, 2} needs two centers at eps 1.5; adding the midpoint lets one suffice.
  const DistanceMatrix big = line({0, 1, 2});
  const std::vector<std::size_t> sub = {0, 2};
  CHECK(count_spanning_intrinsic(big.restricted(sub), 1.5).value == 2);
  CHECK(count_spanning_intrinsic(big, 1.5).value == 1);
  // separated and ambient spanning behave
  CHECK(count_separated(big.restricted(sub), 1.5).value <= count_separated(big, 1.5).value);
  CHECK(count_spanning(big, 1.5, sub, iota(3)).value <= count_spanning(big, 1.5, iota(3), iota(3)).value);
}

TEST_CASE("separated counts are not multiplicative on products") {
  const DistanceMatrix c5 = cycle5();
  CHECK(count_separated(c5, 1.5).value == 2);
  const DistanceMatrix sq = product_matrix(c5, c5);
  CHECK(sq.size() == 25);
  CHECK(check_semimetric(sq).empty());
  CHECK(count_separated(sq, 1.5).value == 5);
  CHECK(count_separated(sq, 3.0).value <= 4);
}

TEST_CASE("greedy separation sandwich") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    const auto rc = checks::random_cloud(rng, 12, 0);
    for (double eps : checks::critical_eps(rc.d)) {
      const auto g = count_separated(rc.d, eps, CountMode::greedy);
      CHECK_FALSE(g.exact);
      CHECK(count_separated(rc.d, 2 * eps).value <= g.value);
      CHECK(g.value <= count_separated(rc.d, eps).value);
    }
  }
}

TEST_CASE("semimetric checks") {
  DistanceMatrix d = line({0, 1, 3});
  CHECK(check_semimetric(d).empty());
  d.at(0, 2) = 10;
  CHECK_FALSE(check_semimetric(d).empty());  // asymmetric and violates the triangle inequality
  DistanceMatrix e(2);
  e.at(0, 0) = 1;
  CHECK_FALSE(check_semimetric(e).empty());
  CHECK(line({0, 1, 3}).diameter() == 3);
  CHECK(line({0, 0, 3}).min_positive() == 3);
  CHECK(std::isinf(line({1, 1}).min_positive()));
  CHECK(scaled(line({0, 2}), 0.5)(0, 1) == 1.0);
}

TEST_CASE("sequence clouds") {
  const PrefixSet words = prefixes(full_shift(2), 3);
  const SeqCloud c = SeqCloud::from_prefixes(words);
  CHECK(c.size() == 8);
  CHECK(c.horizon() == 3);
  CHECK(c.at(5, 0, 0) == 1.0);  // 101
  CHECK(c.at(5, 1, 0) == 0.0);
  CHECK(c.sequence(6) == std::vector<double>{1, 1, 0});

  const PointMap half = [](std::span<const double> x) { return std::vector<double>{x[0] / 2}; };
  const SeqCloud o = orbit_cloud(half, PointCloud::uniform_grid(3), 4);
  CHECK(o.at(2, 3, 0) == 0.125);
  const PointMap bad = [](std::span<const double> x) { return std::vector<double>{1.0 / (x[0] - 0.5)}; };
  CHECK_THROWS_AS(orbit_cloud(bad, PointCloud::uniform_grid(3), 2), OrbitError);
}

TEST_CASE("sweep matches pointwise evaluation") {
  auto cloud = std::make_shared<SeqCloud>(SeqCloud::from_prefixes(prefixes(sr_set(2, Rational(1, 2)), 8)));
  for (double p : {1.0, 2.0, 4.0, kInfinity}) {
    const DnpSeq seq(cloud, BaseMetric::discrete(), p);
    const std::vector<std::size_t> ns = {1, 3, 8};
    std::size_t visits = 0;
    seq.sweep(ns, [&](std::size_t n, const DistanceMatrix& d) {
      ++visits;
      for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j)
          CHECK(d(i, j) == doctest::Approx(dnp(BaseMetric::discrete(), cloud->sequence(i), cloud->sequence(j), n, p)));
    });
    CHECK(visits == 3);
  }
}

TEST_CASE("full shift under the discrete metric has Bowen entropy log 2") {
  auto cloud = std::make_shared<SeqCloud>(SeqCloud::from_prefixes(prefixes(full_shift(2), 10)));
  GridConfig cfg;
  cfg.eps = {0.5};
  for (std::size_t n = 1; n <= 10; ++n) cfg.ns.push_back(n);
  const auto est = bowen_entropy(DnpSeq(cloud, BaseMetric::discrete(), kInfinity), cfg);
  CHECK(est.value == doctest::Approx(std::log(2.0)));
  CHECK(est.counts[0][9] == 1024);
  CHECK_FALSE(est.stabilized);  // a single eps cannot stabilize
  CHECK(est.method == "grid");
}

TEST_CASE("constant sequences have entropy zero") {
  const ConstantSeq seq(line({0, 0.1, 0.5, 0.9}));
  GridConfig cfg;
  cfg.ns = {1, 2, 4, 8};
  const auto est = bowen_entropy(seq, cfg);
  CHECK(est.value == 0.0);
  CHECK(est.method == "constant-sequence");
  CHECK(est.eps.size() == 10);
  CHECK(est.eps.front() == doctest::Approx(0.45));
  CHECK(est.grid_value > 0.0);
}

TEST_CASE("identity map under p = inf") {
  const PointMap id = [](std::span<const double> x) { return std::vector<double>(x.begin(), x.end()); };
  GridConfig cfg;
  const auto est = map_bowen_entropy(id, PointCloud::uniform_grid(101), BaseMetric::euclidean(), kInfinity, 8, cfg);
  CHECK(est.value == 0.0);
  CHECK(est.ns.size() == 8);
}

TEST_CASE("maps reaching a fixed point are eventually constant") {
  const PointMap collapse = [](std::span<const double> x) { return std::vector<double>{x[0] < 0.5 ? 0.0 : x[0]}; };
  GridConfig cfg;
  const auto est = map_bowen_entropy(collapse, PointCloud::uniform_grid(21), BaseMetric::euclidean(), kInfinity, 6, cfg);
  CHECK(est.value == 0.0);
  CHECK(est.method == "eventually-constant");
}

TEST_CASE("greedy grids are closed monotonically") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto cloud = std::make_shared<SeqCloud>(40, 6, 1);
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t t = 0; t < 6; ++t) cloud->at(i, t, 0) = u(rng);
  GridConfig cfg;
  cfg.ns = {1, 2, 3, 4, 5, 6};
  for (auto counter : {CounterKind::separated, CounterKind::intrinsic_spanning}) {
    cfg.counter = counter;
    const auto est = bowen_entropy(DnpSeq(cloud, BaseMetric::euclidean(), 2.0), cfg);
    for (std::size_t a = 0; a < est.eps.size(); ++a)
      for (std::size_t j = 0; j < est.ns.size(); ++j) {
        if (a > 0) CHECK(est.counts[a][j] >= est.counts[a - 1][j]);
        if (j > 0) CHECK(est.counts[a][j] >= est.counts[a][j - 1]);
        if (counter == CounterKind::separated) CHECK(est.counts[a][j] >= est.raw_counts[a][j]);
        else CHECK(est.counts[a][j] <= est.raw_counts[a][j]);
      }
  }
}

TEST_CASE("grid csv") {
  auto cloud = std::make_shared<SeqCloud>(SeqCloud::from_prefixes(prefixes(full_shift(2), 2)));
  GridConfig cfg;
  cfg.eps = {0.5};
  cfg.ns = {1, 2};
  std::ostringstream out;
  write_grid_csv(out, bowen_entropy(DnpSeq(cloud, BaseMetric::discrete(), kInfinity), cfg));
  CHECK(out.str() == "eps,n,count,a_n\n0.5,1,2,0.69314718056\n0.5,2,4,0.69314718056\n");
}

TEST_CASE("geometric eps grid and config errors") {
  const auto g = geometric_eps_grid(8.0, 1, 3);
  CHECK(g == std::vector<double>{4.0, 2.0, 1.0});
  GridConfig cfg;
  CHECK_THROWS_AS(bowen_entropy(ConstantSeq(line({0, 1})), cfg), std::invalid_argument);
  cfg.ns = {2, 1};
  CHECK_THROWS_AS(bowen_entropy(ConstantSeq(line({0, 1})), cfg), std::invalid_argument);
}

}  // TEST_SUITE
