#pragma once

#include "topent/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace topent {

class SeqSetExpr;
using Symbol = std::uint32_t;

struct BlockPair {
  std::uint64_t p = 0;  // free coordinates up to the end of the block
  std::uint64_t q = 0;  // total coordinates up to the end of the block
  friend bool operator==(const BlockPair&, const BlockPair&) = default;
};

/// Frozen/free block layout behind the S_r sets. Pair k ends at coordinate
/// q_k; within block k the first (q_k - q_{k-1}) - (p_k - p_{k-1})
/// coordinates are frozen to z and the remaining ones are free. Past the last
/// pair the final block repeats.
struct BlockSchedule {
  std::vector<BlockPair> pairs;
  double target = 1.0;
  std::optional<Rational> target_rational;

  friend bool operator==(const BlockSchedule& a, const BlockSchedule& b) {
    return a.pairs == b.pairs;
  }
};

/// Violations of the pair conditions; empty when the schedule is valid.
/// The supremum condition is checked as "ratios never exceed the target and
/// the last ratio is within `sup_tolerance` of it".
std::vector<std::string> check_schedule(const BlockSchedule& schedule, double sup_tolerance = 1e-6);

BlockSchedule build_schedule(const Rational& r, std::size_t count);
/// For irrational targets the ratios follow the continued-fraction
/// convergents lying below r.
BlockSchedule build_schedule(double r, std::size_t count);

/// Smallest schedule for a rational target whose last pair reaches n.
BlockSchedule build_schedule_covering(const Rational& r, std::uint64_t n);

/// Number of free coordinates among the first n.
std::uint64_t free_coordinates(const BlockSchedule& schedule, std::uint64_t n);
bool is_free_coordinate(const BlockSchedule& schedule, std::uint64_t index);

SeqSetExpr schedule_to_seqset(const BlockSchedule& schedule, std::uint32_t alphabet_size, Symbol z);

}  // namespace topent
