#pragma once

// Brute-force membership oracle for sequence-set expressions: a word is
// admissible when some sequence in the set starts with it. Each node is
// decided straight from its definition by search, never through the
// library's prefix sets. Exponential; small k and n only.

#include "topent/schedule.hpp"
#include "topent/symbolic.hpp"

#include <algorithm>
#include <functional>

namespace oracle {

using namespace topent;

inline bool frozen_coordinate(const BlockSchedule& s, std::uint64_t i) {
  std::uint64_t start = 0, p_prev = 0;
  std::uint64_t len = 0, frozen = 0;
  for (const auto& pair : s.pairs) {
    len = pair.q - start;
    frozen = len - (pair.p - p_prev);
    if (i < pair.q) return i - start < frozen;
    start = pair.q;
    p_prev = pair.p;
  }
  return (i - start) % len < frozen;
}

inline BlockSchedule schedule_reaching(const Rational& r, std::size_t n) {
  for (std::size_t count = 1;; ++count) {
    BlockSchedule s = build_schedule(r, count);
    if (s.pairs.back().q >= n) return s;
  }
}

bool admissible(const SeqSetExpr& e, const Word& w);

// Depth-first search for a word v of length `len` with `fixed(i)` either
// forcing v[i] or leaving it free, pruned by admissibility in `inner`.
inline bool extend(const SeqSetExpr& inner, std::size_t len,
                   const std::function<std::vector<Symbol>(std::size_t)>& choices, Word& v) {
  if (!admissible(inner, v)) return false;
  if (v.size() == len) return true;
  for (Symbol x : choices(v.size())) {
    v.push_back(x);
    if (extend(inner, len, choices, v)) return true;
    v.pop_back();
  }
  return false;
}

inline std::vector<Symbol> all_of(std::uint32_t k) {
  std::vector<Symbol> v(k);
  for (Symbol i = 0; i < k; ++i) v[i] = i;
  return v;
}

inline bool admissible(const SeqSetExpr& e, const Word& w) {
  const std::uint32_t k = e.alphabet_size();
  for (Symbol x : w)
    if (x >= k) return false;
  const std::size_t n = w.size();
  if (n == 0) return true;

  if (e.as<nodes::FullShift>() || e.as<nodes::EvConst>()) return true;
  if (auto* c = e.as<nodes::CylSched>()) {
    if (auto* seq = std::get_if<SubsetSequence>(&c->schedule)) {
      for (std::size_t i = 0; i < n; ++i)
        if (!std::binary_search(seq->at(i).begin(), seq->at(i).end(), w[i])) return false;
      return true;
    }
    const auto& plan = std::get<BlockPlan>(c->schedule);
    for (std::size_t i = 0; i < n; ++i)
      if (frozen_coordinate(plan.schedule, i) && w[i] != plan.z) return false;
    return true;
  }
  if (auto* s = e.as<nodes::SRSet>()) {
    const BlockSchedule sched = schedule_reaching(s->r, n);
    for (std::size_t i = 0; i < n; ++i)
      if (frozen_coordinate(sched, i) && w[i] != s->z) return false;
    return true;
  }
  if (auto* o = e.as<nodes::Orbit>()) {
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (o->map.table[w[i]] != w[i + 1]) return false;
    return true;
  }
  if (auto* o = e.as<nodes::OrbitSV>()) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const auto& succ = o->relation.successors[w[i]];
      if (!std::binary_search(succ.begin(), succ.end(), w[i + 1])) return false;
    }
    return true;
  }
  if (auto* s = e.as<nodes::Shift>()) {
    const std::uint32_t a = s->inner.alphabet_size();
    Word v;
    return extend(s->inner, s->k + n,
                  [&](std::size_t i) { return i < s->k ? all_of(a) : std::vector<Symbol>{w[i - s->k]}; }, v);
  }
  if (auto* s = e.as<nodes::Dilate>()) {
    Word c;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] != w[(i / s->k) * s->k]) return false;
      if (i % s->k == 0) c.push_back(w[i]);
    }
    return admissible(s->inner, c);
  }
  if (auto* s = e.as<nodes::Restrict>()) {
    const std::uint32_t a = s->inner.alphabet_size();
    Word v;
    return extend(s->inner, (n - 1) * s->k + 1,
                  [&](std::size_t i) { return i % s->k ? all_of(a) : std::vector<Symbol>{w[i / s->k]}; }, v);
  }
  if (auto* s = e.as<nodes::Block>()) {
    const std::uint32_t a = s->inner.alphabet_size();
    Word v(n * s->k);
    for (std::size_t j = 0; j < n; ++j) {
      std::uint64_t code = w[j];
      for (std::size_t i = s->k; i-- > 0;) {
        v[j * s->k + i] = static_cast<Symbol>(code % a);
        code /= a;
      }
    }
    return admissible(s->inner, v);
  }
  if (auto* s = e.as<nodes::Union>()) return admissible(s->left, w) || admissible(s->right, w);
  if (auto* s = e.as<nodes::DisjointUnion>()) {
    const std::uint32_t a = s->left.alphabet_size();
    if (std::all_of(w.begin(), w.end(), [&](Symbol x) { return x < a; })) return admissible(s->left, w);
    if (std::none_of(w.begin(), w.end(), [&](Symbol x) { return x < a; })) {
      Word v = w;
      for (auto& x : v) x -= a;
      return admissible(s->right, v);
    }
    return false;
  }
  if (auto* s = e.as<nodes::Product>()) {
    const std::uint32_t b = s->right.alphabet_size();
    Word l(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
      l[i] = w[i] / b;
      r[i] = w[i] % b;
    }
    return admissible(s->left, l) && admissible(s->right, r);
  }
  if (auto* s = e.as<nodes::Image>()) {
    Word v;
    return extend(s->inner, n,
                  [&](std::size_t i) {
                    std::vector<Symbol> pre;
                    for (Symbol x = 0; x < s->map.table.size(); ++x)
                      if (s->map.table[x] == w[i]) pre.push_back(x);
                    return pre;
                  },
                  v);
  }
  if (auto* s = e.as<nodes::FiniteSet>()) {
    for (const auto& seq : s->sequences) {
      bool match = true;
      for (std::size_t i = 0; i < n && match; ++i) match = seq.at(i) == w[i];
      if (match) return true;
    }
    return false;
  }
  if (auto* s = e.as<nodes::Closure>()) return admissible(s->inner, w);
  return false;
}

/// Admissible words of length n in lexicographic order.
inline std::vector<Word> prefixes(const SeqSetExpr& e, std::size_t n) {
  const std::uint32_t k = e.alphabet_size();
  std::vector<Word> out;
  Word w(n, 0);
  for (;;) {
    if (admissible(e, w)) out.push_back(w);
    std::size_t i = n;
    while (i > 0 && w[i - 1] + 1 == k) w[--i] = 0;
    if (i == 0) break;
    ++w[i - 1];
  }
  return out;
}

}  // namespace oracle
