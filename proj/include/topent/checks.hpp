#pragma once

// Randomized property suites over the whole library. Each suite reports the
// number of instances and checks it ran and every violation with a
// counterexample.

#include "topent/bowen.hpp"
#include "topent/symbolic.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace topent::checks {

struct Violation {
  std::string property;
  std::string counterexample;
};

struct SuiteReport {
  std::string suite;
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t skipped = 0;  // instances or lengths dropped for budget reasons
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool passed() const { return violations.empty(); }
};

struct SuiteConfig {
  std::uint64_t seed = 0x5eed2024;
  std::size_t instances = 0;  // 0: suite default
  Budget budget{std::uint64_t{1} << 14};
};

/// lemma-4.1, counting, schedule, roundtrip, sft, fractal, product, dnp.
const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg = {});

// ---------------------------------------------------------------------------
// Generators, shared with the test programs.

/// A well-formed expression with alphabet size exactly k (1 <= k <= 4) and at
/// most `max_depth` nodes on any path; every node's alphabet is at most 4.
SeqSetExpr random_expr(std::mt19937_64& rng, std::uint32_t k, std::size_t max_depth);

struct RandomCloud {
  bowen::DistanceMatrix d;        // on all points of the ambient sample X
  bowen::DistanceMatrix d_upper;  // a second semimetric with d_upper >= d
  std::size_t k_size = 0;         // K' = [0, k_size)
  std::vector<std::size_t> sub;   // K, a subset of K'
  std::string description;
};

/// Points from a random embedding into R^1..R^3 (often on a coarse integer
/// lattice so that ties occur), measured with a random l1, l2, l-inf or
/// projected semimetric. K' has at most `max_points` points; X adds up to
/// `max_extra` ambient candidates.
RandomCloud random_cloud(std::mt19937_64& rng, std::size_t max_points = 12, std::size_t max_extra = 6);

/// Every distinct positive value of d and the midpoints between neighbours.
std::vector<double> critical_eps(const bowen::DistanceMatrix& d);

}  // namespace topent::checks
