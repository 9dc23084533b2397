#include "topent/bowen.hpp"
#include "topent/simd/kernels.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

using namespace topent;

namespace {

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) {
    const int kind = int(rng() % 10);
    x = kind == 0 ? 0.0 : kind == 1 ? -0.0 : kind == 2 ? std::round(u(rng)) : u(rng);
  }
  return v;
}

struct Restore {
  ~Restore() { simd::reset_override(); }
};

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("scalar table is always present") {
  CHECK(std::string(simd::scalar_kernels().name) == "scalar");
  Restore r;
  simd::set_override(simd::Isa::scalar);
  CHECK(simd::active_isa() == simd::Isa::scalar);
  CHECK(&simd::active() == &simd::scalar_kernels());
}

TEST_CASE("AVX2 kernels match the scalar reference bit for bit") {
  const simd::KernelTable* avx = simd::avx2_kernels();
  if (!avx) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const simd::KernelTable& ref = simd::scalar_kernels();
  std::mt19937_64 rng(11);
  for (std::size_t n = 0; n <= 67; ++n) {
    for (int rep = 0; rep < 8; ++rep) {
      const auto ys = random_values(rng, n), v = random_values(rng, n), acc0 = random_values(rng, n);
      const double x = random_values(rng, 1)[0];
      INFO("n=", n);

      std::vector<double> a(n), b(n);
      ref.abs_diff(x, ys.data(), a.data(), n);
      avx->abs_diff(x, ys.data(), b.data(), n);
      CHECK(same_bits(a, b));

      a = acc0, b = acc0;
      ref.sq_diff_acc(x, ys.data(), a.data(), n);
      avx->sq_diff_acc(x, ys.data(), b.data(), n);
      CHECK(same_bits(a, b));

      ref.not_equal(x, ys.data(), a.data(), n);
      avx->not_equal(x, ys.data(), b.data(), n);
      CHECK(same_bits(a, b));

      a = ys, b = ys;
      for (auto* w : {&a, &b})
        for (auto& t : *w) t = std::fabs(t);
      ref.sqrt_inplace(a.data(), n);
      avx->sqrt_inplace(b.data(), n);
      CHECK(same_bits(a, b));

      a = acc0, b = acc0;
      ref.max_acc(v.data(), a.data(), n);
      avx->max_acc(v.data(), b.data(), n);
      CHECK(same_bits(a, b));

      a = acc0, b = acc0;
      ref.sum_acc(v.data(), a.data(), n);
      avx->sum_acc(v.data(), b.data(), n);
      CHECK(same_bits(a, b));

      a = acc0, b = acc0;
      ref.sum_sq_acc(v.data(), a.data(), n);
      avx->sum_sq_acc(v.data(), b.data(), n);
      CHECK(same_bits(a, b));

      std::vector<std::uint8_t> fa(n), fb(n);
      for (std::size_t j = 0; j < n; ++j) fa[j] = fb[j] = std::uint8_t(rng() % 4 == 0);
      const double eps = std::fabs(x);
      CHECK(ref.mark_below(v.data(), eps, fa.data(), n) == avx->mark_below(v.data(), eps, fb.data(), n));
      CHECK(fa == fb);
    }
  }
}

TEST_CASE("mark_below counts newly set flags") {
  const std::vector<double> row = {0.5, 2.0, 0.1, 1.0, 0.99};
  std::vector<std::uint8_t> flags = {0, 0, 1, 0, 0};
  CHECK(simd::mark_below(row, 1.0, flags) == 2);
  CHECK(flags == std::vector<std::uint8_t>{1, 0, 1, 0, 1});
  std::vector<std::uint8_t> short_flags(2);
  CHECK_THROWS_AS(simd::mark_below(row, 1.0, short_flags), std::invalid_argument);
}

TEST_CASE("distance sweeps agree across kernel tables") {
  if (!simd::avx2_kernels()) {
    MESSAGE("AVX2 kernels unavailable; sweep equivalence not exercised");
    return;
  }
  Restore r;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto cloud = std::make_shared<bowen::SeqCloud>(37, 9, 2);
  for (std::size_t i = 0; i < 37; ++i)
    for (std::size_t t = 0; t < 9; ++t)
      for (std::size_t c = 0; c < 2; ++c) cloud->at(i, t, c) = u(rng);
  const std::vector<std::size_t> ns = {1, 2, 5, 9};
  for (double p : {1.0, 2.0, 3.5, bowen::kInfinity}) {
    for (auto metric : {bowen::BaseMetric::euclidean(), bowen::BaseMetric::discrete()}) {
      const bowen::DnpSeq seq(cloud, metric, p);
      std::vector<std::vector<double>> runs[2];
      for (int pass = 0; pass < 2; ++pass) {
        simd::set_override(pass == 0 ? simd::Isa::scalar : simd::Isa::avx2);
        seq.sweep(ns, [&](std::size_t, const bowen::DistanceMatrix& d) { runs[pass].push_back(d.data()); });
      }
      REQUIRE(runs[0].size() == ns.size());
      for (std::size_t i = 0; i < ns.size(); ++i) CHECK(same_bits(runs[0][i], runs[1][i]));
      // greedy separation scans use mark_below
      for (double eps : {0.1, 0.4, 0.9}) {
        const auto d = seq.matrix(5);
        simd::set_override(simd::Isa::scalar);
        const auto g0 = bowen::count_separated(d, eps, bowen::CountMode::greedy);
        simd::set_override(simd::Isa::avx2);
        const auto g1 = bowen::count_separated(d, eps, bowen::CountMode::greedy);
        CHECK(g0.value == g1.value);
        CHECK(g0.witness == g1.witness);
      }
    }
  }
}

}  // TEST_SUITE
