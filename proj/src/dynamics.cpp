#include "topent/dynamics.hpp"

#include <algorithm>

namespace topent {

std::vector<std::string> check_map(const FiniteMap& map) {
  std::vector<std::string> out;
  if (map.table.empty()) out.emplace_back("map has an empty alphabet");
  for (std::size_t i = 0; i < map.table.size(); ++i)
    if (map.table[i] >= map.size()) out.push_back("T(" + std::to_string(i) + ") outside the alphabet");
  return out;
}

std::vector<std::string> check_relation(const TransitionRelation& relation) {
  std::vector<std::string> out;
  if (relation.successors.empty()) out.emplace_back("relation has an empty alphabet");
  for (std::size_t i = 0; i < relation.successors.size(); ++i) {
    const auto& s = relation.successors[i];
    if (s.empty()) out.push_back("symbol " + std::to_string(i) + " has no successor");
    for (Symbol j : s)
      if (j >= relation.size()) out.push_back("successor " + std::to_string(j) + " of " + std::to_string(i) + " outside the alphabet");
  }
  return out;
}

SeqSetExpr orbit_seqset(const FiniteMap& map) {
  if (auto d = check_map(map); !d.empty()) throw std::invalid_argument("orbit_seqset: " + d.front());
  return orbit(map);
}

SeqSetExpr sft_seqset(const TransitionRelation& relation) {
  if (auto d = check_relation(relation); !d.empty()) throw std::invalid_argument("sft_seqset: " + d.front());
  TransitionRelation r = relation;
  for (auto& s : r.successors) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  return orbit_sv(std::move(r));
}

FiniteMap modify_map(const ModifiedMap& m) {
  if (auto d = check_map(m.base); !d.empty()) throw std::invalid_argument("modify_map: " + d.front());
  const auto in_k = [&](Symbol x) { return std::binary_search(m.k_set.begin(), m.k_set.end(), x); };
  std::vector<std::string> offending;
  if (m.k_set.empty() || m.k_set.size() >= m.base.size())
    offending.emplace_back("K must be a nonempty proper subset");
  if (!in_k(m.z)) offending.push_back("z=" + std::to_string(m.z) + " is not in K");
  for (Symbol x = 0; x < m.base.size(); ++x)
    if (in_k(x) != in_k(m.base(x)))
      offending.push_back("T(" + std::to_string(x) + ")=" + std::to_string(m.base(x)) + " leaves its part");
  if (!offending.empty()) throw InvarianceViolation("modify_map: invariance violated", std::move(offending));

  FiniteMap out = m.base;
  for (Symbol x = 0; x < out.size(); ++x)
    if (in_k(x)) out.table[x] = m.z;
  return out;
}

PointMap modify_map(const ModifiedPointMap& m, const PointCloud& sample) {
  std::vector<std::string> offending;
  if (!m.in_k(m.z)) offending.emplace_back("z is not in K");
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto x = sample.point(i);
    const auto tx = m.base(x);
    if (m.in_k(x) != m.in_k(tx)) offending.push_back("sample point " + std::to_string(i) + " leaves its part");
  }
  if (!offending.empty()) throw InvarianceViolation("modify_map: invariance violated on the sample", std::move(offending));
  return [base = m.base, in_k = m.in_k, z = m.z](std::span<const double> x) {
    return in_k(x) ? z : base(x);
  };
}

}  // namespace topent
