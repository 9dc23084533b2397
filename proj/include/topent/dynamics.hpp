#pragma once

#include "topent/cloud.hpp"
#include "topent/symbolic.hpp"

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topent {

/// A map T with T(K) in K, T(X \ K) in X \ K, and its modification
/// T_{K,z}: x -> z on K, x -> T(x) elsewhere.
struct ModifiedMap {
  FiniteMap base;
  SymbolSet k_set;  // sorted
  Symbol z = 0;
};

class InvarianceViolation : public std::invalid_argument {
 public:
  InvarianceViolation(const std::string& what, std::vector<std::string> offending)
      : std::invalid_argument(what), offending_(std::move(offending)) {}
  const std::vector<std::string>& offending() const { return offending_; }

 private:
  std::vector<std::string> offending_;
};

SeqSetExpr orbit_seqset(const FiniteMap& map);

/// Throws std::invalid_argument if some symbol has no successor.
SeqSetExpr sft_seqset(const TransitionRelation& relation);

std::vector<std::string> check_map(const FiniteMap& map);
std::vector<std::string> check_relation(const TransitionRelation& relation);

/// Exhaustive invariance check, then the pointwise modification.
FiniteMap modify_map(const ModifiedMap& m);

using PointMap = std::function<std::vector<double>(std::span<const double>)>;
using PointPredicate = std::function<bool(std::span<const double>)>;

struct ModifiedPointMap {
  PointMap base;
  PointPredicate in_k;
  std::vector<double> z;
};

/// Invariance is checked on the sample only; a general predicate is not decidable.
PointMap modify_map(const ModifiedPointMap& m, const PointCloud& sample);

}  // namespace topent
