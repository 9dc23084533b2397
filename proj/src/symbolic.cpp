#include "topent/symbolic.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace topent {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::uint32_t kAlphabetOverflow = std::numeric_limits<std::uint32_t>::max();

std::uint32_t saturating_mul(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t p = std::uint64_t{a} * b;
  return p >= kAlphabetOverflow ? kAlphabetOverflow : static_cast<std::uint32_t>(p);
}

std::uint32_t saturating_pow(std::uint32_t a, std::size_t e) {
  std::uint32_t r = 1;
  for (std::size_t i = 0; i < e && r != kAlphabetOverflow; ++i) r = saturating_mul(r, a);
  return r;
}

SeqSetExpr make(NodeVariant v, std::uint32_t alphabet) {
  return SeqSetExpr(std::make_shared<const ExprNode>(ExprNode{std::move(v), alphabet}));
}

void sort_unique(std::vector<Word>& words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
}

void require_budget(const Count& size, const Budget& budget, const char* what) {
  if (size > budget.max_words) {
    throw BudgetExceeded(std::string("budget exceeded: materializing ") + what + " needs " +
                         size.str() + " words (cap " + std::to_string(budget.max_words) + ")");
  }
}

PrefixSet make_set(std::uint32_t k, std::size_t n, std::vector<Word> words) {
  PrefixSet out;
  out.alphabet.size = k;
  out.length = n;
  out.words = std::move(words);
  return out;
}

// All words w with w_i in coordinates[i], in lexicographic order.
std::vector<Word> enumerate_cylinder(const std::vector<SymbolSet>& coordinates, const Budget& budget,
                                     const char* what) {
  Count total = 1;
  for (const auto& c : coordinates) total *= c.size();
  require_budget(total, budget, what);
  std::vector<Word> out;
  if (total == 0) return out;
  out.reserve(static_cast<std::size_t>(total));
  const std::size_t n = coordinates.size();
  std::vector<std::size_t> idx(n, 0);
  Word w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = coordinates[i][0];
  while (true) {
    out.push_back(w);
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++idx[pos] < coordinates[pos].size()) {
        w[pos] = coordinates[pos][idx[pos]];
        break;
      }
      idx[pos] = 0;
      w[pos] = coordinates[pos][0];
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

SymbolSet all_symbols(std::uint32_t k) {
  SymbolSet s(k);
  std::iota(s.begin(), s.end(), Symbol{0});
  return s;
}

std::vector<SymbolSet> cylinder_coordinates(std::uint32_t k, const CylinderSchedule& schedule,
                                            std::size_t n) {
  std::vector<SymbolSet> coords;
  coords.reserve(n);
  std::visit(Overloaded{
                 [&](const SubsetSequence& seq) {
                   for (std::size_t i = 0; i < n; ++i) coords.push_back(seq.at(i));
                 },
                 [&](const BlockPlan& plan) {
                   const SymbolSet all = all_symbols(k);
                   for (std::size_t i = 0; i < n; ++i)
                     coords.push_back(is_free_coordinate(plan.schedule, i) ? all : SymbolSet{plan.z});
                 },
             },
             schedule);
  return coords;
}

Count cylinder_count(std::uint32_t k, const CylinderSchedule& schedule, std::size_t n) {
  return std::visit(Overloaded{
                        [&](const SubsetSequence& seq) {
                          Count c = 1;
                          for (std::size_t i = 0; i < n; ++i) c *= seq.at(i).size();
                          return c;
                        },
                        [&](const BlockPlan& plan) {
                          return ipow(k, static_cast<std::size_t>(free_coordinates(plan.schedule, n)));
                        },
                    },
                    schedule);
}

BlockPlan sr_plan(const nodes::SRSet& s, std::size_t n) {
  return BlockPlan{build_schedule_covering(s.r, std::max<std::size_t>(n, 1)), s.z};
}

using CountMatrix = std::vector<std::vector<Count>>;

CountMatrix mat_mul(const CountMatrix& a, const CountMatrix& b) {
  const std::size_t k = a.size();
  CountMatrix c(k, std::vector<Count>(k, 0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t l = 0; l < k; ++l) {
      if (a[i][l] == 0) continue;
      for (std::size_t j = 0; j < k; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

// 1^T A^(n-1) 1: the number of n-vertex walks.
Count walk_count(const TransitionRelation& rel, std::size_t n) {
  if (n == 0) return 1;
  const std::size_t k = rel.size();
  CountMatrix result(k, std::vector<Count>(k, 0));
  CountMatrix base(k, std::vector<Count>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    result[i][i] = 1;
    for (Symbol j : rel.successors[i]) base[i][j] = 1;
  }
  std::size_t e = n - 1;
  while (e > 0) {
    if (e & 1U) result = mat_mul(result, base);
    e >>= 1U;
    if (e > 0) base = mat_mul(base, base);
  }
  Count total = 0;
  for (const auto& row : result)
    for (const auto& x : row) total += x;
  return total;
}

std::size_t ceil_div(std::size_t a, std::size_t b) { return (a + b - 1) / b; }

// ---------------------------------------------------------------------------
// materialization

PrefixSet prefixes_impl(const SeqSetExpr& e, std::size_t n, const Budget& budget);
Count count_impl(const SeqSetExpr& e, std::size_t n, const Budget& budget);

PrefixSet prefixes_impl(const SeqSetExpr& e, std::size_t n, const Budget& budget) {
  const std::uint32_t k = e.alphabet_size();
  return std::visit(
      Overloaded{
          [&](const nodes::FullShift& s) {
            return make_set(k, n, enumerate_cylinder(std::vector<SymbolSet>(n, all_symbols(s.k)), budget, "full shift"));
          },
          [&](const nodes::EvConst& s) {
            return make_set(k, n, enumerate_cylinder(std::vector<SymbolSet>(n, all_symbols(s.k)), budget, "eventually-constant set"));
          },
          [&](const nodes::CylSched& s) {
            return make_set(k, n, enumerate_cylinder(cylinder_coordinates(s.k, s.schedule, n), budget, "cylinder schedule"));
          },
          [&](const nodes::SRSet& s) {
            return make_set(k, n, enumerate_cylinder(cylinder_coordinates(s.k, sr_plan(s, n), n), budget, "sr set"));
          },
          [&](const nodes::Orbit& s) {
            std::vector<Word> words;
            words.reserve(s.map.size());
            for (Symbol x = 0; x < s.map.size(); ++x) {
              Word w(n);
              Symbol cur = x;
              for (std::size_t i = 0; i < n; ++i) {
                w[i] = cur;
                cur = s.map(cur);
              }
              words.push_back(std::move(w));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::OrbitSV& s) {
            require_budget(walk_count(s.relation, n), budget, "set-valued orbit");
            std::vector<Word> words;
            if (n == 0) {
              words.emplace_back();
              return make_set(k, n, std::move(words));
            }
            Word w(n);
            // iterative DFS, successors visited in increasing order
            std::vector<std::size_t> next(n, 0);
            std::size_t depth = 0;
            Symbol start = 0;
            while (true) {
              if (depth == 0) {
                if (start >= s.relation.size()) break;
                w[0] = start++;
                next[0] = 0;
                if (n == 1) {
                  words.push_back(w);
                  continue;
                }
                depth = 1;
                next[1] = 0;
                continue;
              }
              const auto& succ = s.relation.successors[w[depth - 1]];
              if (next[depth] >= succ.size()) {
                --depth;
                if (depth > 0) ++next[depth];
                continue;
              }
              w[depth] = succ[next[depth]];
              if (depth + 1 == n) {
                words.push_back(w);
                ++next[depth];
              } else {
                ++depth;
                next[depth] = 0;
              }
            }
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Shift& s) {
            PrefixSet inner = prefixes_impl(s.inner, n + s.k, budget);
            std::vector<Word> words;
            words.reserve(inner.size());
            for (const auto& w : inner.words) words.emplace_back(w.begin() + static_cast<std::ptrdiff_t>(s.k), w.end());
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Dilate& s) {
            PrefixSet inner = prefixes_impl(s.inner, ceil_div(n, s.k), budget);
            std::vector<Word> words;
            words.reserve(inner.size());
            for (const auto& w : inner.words) {
              Word out(n);
              for (std::size_t i = 0; i < n; ++i) out[i] = w[i / s.k];
              words.push_back(std::move(out));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Restrict& s) {
            const std::size_t m = n == 0 ? 0 : (n - 1) * s.k + 1;
            PrefixSet inner = prefixes_impl(s.inner, m, budget);
            std::vector<Word> words;
            words.reserve(inner.size());
            for (const auto& w : inner.words) {
              Word out(n);
              for (std::size_t i = 0; i < n; ++i) out[i] = w[i * s.k];
              words.push_back(std::move(out));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Block& s) {
            const std::uint32_t base = s.inner.alphabet_size();
            PrefixSet inner = prefixes_impl(s.inner, n * s.k, budget);
            std::vector<Word> words;
            words.reserve(inner.size());
            for (const auto& w : inner.words) {
              Word out(n);
              for (std::size_t j = 0; j < n; ++j) {
                std::uint64_t code = 0;
                for (std::size_t i = 0; i < s.k; ++i) code = code * base + w[j * s.k + i];
                out[j] = static_cast<Symbol>(code);
              }
              words.push_back(std::move(out));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Union& s) {
            PrefixSet a = prefixes_impl(s.left, n, budget);
            PrefixSet b = prefixes_impl(s.right, n, budget);
            std::vector<Word> words;
            words.reserve(a.size() + b.size());
            std::set_union(a.words.begin(), a.words.end(), b.words.begin(), b.words.end(), std::back_inserter(words));
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::DisjointUnion& s) {
            PrefixSet a = prefixes_impl(s.left, n, budget);
            PrefixSet b = prefixes_impl(s.right, n, budget);
            const Symbol offset = s.left.alphabet_size();
            std::vector<Word> words = std::move(a.words);
            for (auto w : b.words) {
              for (auto& x : w) x += offset;
              words.push_back(std::move(w));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Product& s) {
            PrefixSet a = prefixes_impl(s.left, n, budget);
            PrefixSet b = prefixes_impl(s.right, n, budget);
            require_budget(Count(a.size()) * b.size(), budget, "product");
            const Symbol kr = s.right.alphabet_size();
            std::vector<Word> words;
            words.reserve(a.size() * b.size());
            for (const auto& u : a.words)
              for (const auto& v : b.words) {
                Word w(n);
                for (std::size_t i = 0; i < n; ++i) w[i] = u[i] * kr + v[i];
                words.push_back(std::move(w));
              }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Image& s) {
            PrefixSet inner = prefixes_impl(s.inner, n, budget);
            std::vector<Word> words;
            words.reserve(inner.size());
            for (auto w : inner.words) {
              for (auto& x : w) x = s.map.table[x];
              words.push_back(std::move(w));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::FiniteSet& s) {
            std::vector<Word> words;
            words.reserve(s.sequences.size());
            for (const auto& seq : s.sequences) {
              Word w(n);
              for (std::size_t i = 0; i < n; ++i) w[i] = seq.at(i);
              words.push_back(std::move(w));
            }
            sort_unique(words);
            return make_set(k, n, std::move(words));
          },
          [&](const nodes::Closure& s) { return prefixes_impl(s.inner, n, budget); },
      },
      e.node().value);
}

Count count_impl(const SeqSetExpr& e, std::size_t n, const Budget& budget) {
  return std::visit(
      Overloaded{
          [&](const nodes::FullShift& s) { return ipow(s.k, n); },
          [&](const nodes::EvConst& s) { return ipow(s.k, n); },
          [&](const nodes::CylSched& s) { return cylinder_count(s.k, s.schedule, n); },
          [&](const nodes::SRSet& s) { return cylinder_count(s.k, sr_plan(s, n), n); },
          [&](const nodes::OrbitSV& s) { return walk_count(s.relation, n); },
          [&](const nodes::Dilate& s) { return count_impl(s.inner, ceil_div(n, s.k), budget); },
          [&](const nodes::Block& s) { return count_impl(s.inner, n * s.k, budget); },
          [&](const nodes::Product& s) {
            return Count(count_impl(s.left, n, budget) * count_impl(s.right, n, budget));
          },
          [&](const nodes::DisjointUnion& s) {
            if (n == 0) return Count(1);
            return Count(count_impl(s.left, n, budget) + count_impl(s.right, n, budget));
          },
          [&](const nodes::Closure& s) { return count_impl(s.inner, n, budget); },
          [&](const auto&) { return Count(prefixes_impl(e, n, budget).size()); },
      },
      e.node().value);
}

// ---------------------------------------------------------------------------
// validation

void check_symbols(const SymbolSet& set, std::uint32_t k, const std::string& where,
                   std::vector<std::string>& out) {
  if (set.empty()) out.push_back(where + ": empty symbol set");
  if (!std::is_sorted(set.begin(), set.end()) || std::adjacent_find(set.begin(), set.end()) != set.end())
    out.push_back(where + ": symbol set must be sorted without duplicates");
  for (Symbol s : set)
    if (s >= k) out.push_back(where + ": symbol " + std::to_string(s) + " outside alphabet of size " + std::to_string(k));
}

void validate_impl(const SeqSetExpr& e, const std::string& path, std::vector<std::string>& out) {
  auto alphabet_ok = [&](std::uint32_t k, const char* node) {
    if (k == 0) {
      out.push_back(path + node + ": alphabet size must be >= 1");
      return false;
    }
    if (k == kAlphabetOverflow) {
      out.push_back(path + node + ": alphabet size overflows");
      return false;
    }
    return true;
  };
  std::visit(
      Overloaded{
          [&](const nodes::FullShift& s) { alphabet_ok(s.k, "full"); },
          [&](const nodes::EvConst& s) {
            if (alphabet_ok(s.k, "evconst") && s.z >= s.k)
              out.push_back(path + "evconst: symbol z=" + std::to_string(s.z) + " outside alphabet of size " + std::to_string(s.k));
          },
          [&](const nodes::CylSched& s) {
            if (!alphabet_ok(s.k, "cylsched")) return;
            std::visit(Overloaded{
                           [&](const SubsetSequence& seq) {
                             if (seq.period.empty()) out.push_back(path + "cylsched: period must be nonempty");
                             for (std::size_t i = 0; i < seq.prefix.size(); ++i)
                               check_symbols(seq.prefix[i], s.k, path + "cylsched[" + std::to_string(i) + "]", out);
                             for (std::size_t i = 0; i < seq.period.size(); ++i)
                               check_symbols(seq.period[i], s.k, path + "cylsched period[" + std::to_string(i) + "]", out);
                           },
                           [&](const BlockPlan& plan) {
                             if (plan.z >= s.k) out.push_back(path + "cylsched: frozen symbol outside alphabet");
                             BlockSchedule copy = plan.schedule;
                             // the target is implied by the pairs themselves
                             if (!copy.pairs.empty()) {
                               copy.target = static_cast<double>(copy.pairs.back().p) / static_cast<double>(copy.pairs.back().q);
                               copy.target_rational.reset();
                             }
                             for (const auto& d : check_schedule(copy)) out.push_back(path + "cylsched: " + d);
                           },
                       },
                       s.schedule);
          },
          [&](const nodes::SRSet& s) {
            if (!alphabet_ok(s.k, "sr")) return;
            if (s.z >= s.k) out.push_back(path + "sr: frozen symbol outside alphabet");
            if (!(s.r > Rational(0) && s.r <= Rational(1))) out.push_back(path + "sr: r must lie in (0, 1], got " + s.r.str());
          },
          [&](const nodes::Orbit& s) {
            if (s.map.table.empty()) out.push_back(path + "orbit: empty map table");
            for (std::size_t i = 0; i < s.map.table.size(); ++i)
              if (s.map.table[i] >= s.map.size())
                out.push_back(path + "orbit: image of " + std::to_string(i) + " outside alphabet");
          },
          [&](const nodes::OrbitSV& s) {
            if (s.relation.successors.empty()) out.push_back(path + "sft: empty relation");
            for (std::size_t i = 0; i < s.relation.successors.size(); ++i)
              check_symbols(s.relation.successors[i], s.relation.size(), path + "sft successors of " + std::to_string(i), out);
          },
          [&](const nodes::Shift& s) {
            if (s.k < 1) out.push_back(path + "shift: k must be >= 1");
            validate_impl(s.inner, path + "shift/", out);
          },
          [&](const nodes::Dilate& s) {
            if (s.k < 2) out.push_back(path + "dilate: k must be >= 2, got " + std::to_string(s.k));
            validate_impl(s.inner, path + "dilate/", out);
          },
          [&](const nodes::Restrict& s) {
            if (s.k < 1) out.push_back(path + "restrict: k must be >= 1");
            validate_impl(s.inner, path + "restrict/", out);
          },
          [&](const nodes::Block& s) {
            if (s.k < 2) out.push_back(path + "block: k must be >= 2, got " + std::to_string(s.k));
            else alphabet_ok(e.alphabet_size(), "block");
            validate_impl(s.inner, path + "block/", out);
          },
          [&](const nodes::Union& s) {
            if (s.left.alphabet_size() != s.right.alphabet_size())
              out.push_back(path + "union: alphabet mismatch (" + std::to_string(s.left.alphabet_size()) + " vs " +
                            std::to_string(s.right.alphabet_size()) + ")");
            validate_impl(s.left, path + "union.0/", out);
            validate_impl(s.right, path + "union.1/", out);
          },
          [&](const nodes::DisjointUnion& s) {
            alphabet_ok(e.alphabet_size(), "djunion");
            validate_impl(s.left, path + "djunion.0/", out);
            validate_impl(s.right, path + "djunion.1/", out);
          },
          [&](const nodes::Product& s) {
            alphabet_ok(e.alphabet_size(), "prod");
            validate_impl(s.left, path + "prod.0/", out);
            validate_impl(s.right, path + "prod.1/", out);
          },
          [&](const nodes::Image& s) {
            if (s.map.table.size() != s.inner.alphabet_size())
              out.push_back(path + "image: map has " + std::to_string(s.map.table.size()) +
                            " entries but the source alphabet has " + std::to_string(s.inner.alphabet_size()) + " symbols");
            if (alphabet_ok(s.map.target_size, "image"))
              for (Symbol x : s.map.table)
                if (x >= s.map.target_size)
                  out.push_back(path + "image: target symbol " + std::to_string(x) + " outside alphabet of size " +
                                std::to_string(s.map.target_size));
            validate_impl(s.inner, path + "image/", out);
          },
          [&](const nodes::FiniteSet& s) {
            if (!alphabet_ok(s.k, "finite")) return;
            if (s.sequences.empty()) out.push_back(path + "finite: the set must be nonempty");
            for (std::size_t i = 0; i < s.sequences.size(); ++i) {
              const auto& seq = s.sequences[i];
              if (seq.period.empty()) out.push_back(path + "finite: sequence " + std::to_string(i) + " has an empty period");
              for (Symbol x : seq.prefix)
                if (x >= s.k) out.push_back(path + "finite: sequence " + std::to_string(i) + " uses symbol outside alphabet");
              for (Symbol x : seq.period)
                if (x >= s.k) out.push_back(path + "finite: sequence " + std::to_string(i) + " uses symbol outside alphabet");
            }
          },
          [&](const nodes::Closure& s) { validate_impl(s.inner, path + "cls/", out); },
      },
      e.node().value);
}

void require_valid(const SeqSetExpr& e) {
  const auto diags = validate(e);
  if (!diags.empty()) throw std::invalid_argument("malformed sequence-set expression: " + diags.front());
}

}  // namespace

std::vector<std::string> Alphabet::check() const {
  std::vector<std::string> out;
  if (size < 1) out.emplace_back("alphabet size must be >= 1");
  if (!labels.empty()) {
    if (labels.size() != size) out.emplace_back("label count differs from alphabet size");
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) out.emplace_back("labels must be distinct");
  }
  return out;
}

bool PrefixSet::contains(const Word& w) const { return std::binary_search(words.begin(), words.end(), w); }

bool operator==(const SeqSetExpr& a, const SeqSetExpr& b) {
  if (a.node_ == b.node_) return true;
  return a.node_->value == b.node_->value;
}

SeqSetExpr full_shift(std::uint32_t k) { return make(nodes::FullShift{k}, k); }
SeqSetExpr ev_const(std::uint32_t k, Symbol z) { return make(nodes::EvConst{k, z}, k); }
SeqSetExpr cyl_sched(std::uint32_t k, SubsetSequence subsets) {
  return make(nodes::CylSched{k, std::move(subsets)}, k);
}
SeqSetExpr cyl_sched(std::uint32_t k, BlockPlan plan) { return make(nodes::CylSched{k, std::move(plan)}, k); }
SeqSetExpr sr_set(std::uint32_t k, Rational r, Symbol z) { return make(nodes::SRSet{k, z, r}, k); }
SeqSetExpr orbit(FiniteMap map) {
  const auto k = map.size();
  return make(nodes::Orbit{std::move(map)}, k);
}
SeqSetExpr orbit_sv(TransitionRelation relation) {
  const auto k = relation.size();
  return make(nodes::OrbitSV{std::move(relation)}, k);
}
SeqSetExpr shift(std::size_t k, SeqSetExpr inner) {
  const auto a = inner.alphabet_size();
  return make(nodes::Shift{k, std::move(inner)}, a);
}
SeqSetExpr dilate(std::size_t k, SeqSetExpr inner) {
  const auto a = inner.alphabet_size();
  return make(nodes::Dilate{k, std::move(inner)}, a);
}
SeqSetExpr restriction(std::size_t k, SeqSetExpr inner) {
  const auto a = inner.alphabet_size();
  return make(nodes::Restrict{k, std::move(inner)}, a);
}
SeqSetExpr block(std::size_t k, SeqSetExpr inner) {
  const auto a = saturating_pow(inner.alphabet_size(), k);
  return make(nodes::Block{k, std::move(inner)}, a);
}
SeqSetExpr unite(SeqSetExpr left, SeqSetExpr right) {
  const auto a = left.alphabet_size();
  return make(nodes::Union{std::move(left), std::move(right)}, a);
}
SeqSetExpr disjoint_union(SeqSetExpr left, SeqSetExpr right) {
  const std::uint64_t sum = std::uint64_t{left.alphabet_size()} + right.alphabet_size();
  const auto a = sum >= kAlphabetOverflow ? kAlphabetOverflow : static_cast<std::uint32_t>(sum);
  return make(nodes::DisjointUnion{std::move(left), std::move(right)}, a);
}
SeqSetExpr product(SeqSetExpr left, SeqSetExpr right) {
  const auto a = saturating_mul(left.alphabet_size(), right.alphabet_size());
  return make(nodes::Product{std::move(left), std::move(right)}, a);
}
SeqSetExpr image(SymbolMap map, SeqSetExpr inner) {
  const auto a = map.target_size;
  return make(nodes::Image{std::move(map), std::move(inner)}, a);
}
SeqSetExpr finite_set(std::uint32_t k, std::vector<PeriodicSequence> sequences) {
  return make(nodes::FiniteSet{k, std::move(sequences)}, k);
}
SeqSetExpr closure(SeqSetExpr inner) {
  const auto a = inner.alphabet_size();
  return make(nodes::Closure{std::move(inner)}, a);
}

std::vector<std::string> validate(const SeqSetExpr& expr) {
  std::vector<std::string> out;
  validate_impl(expr, "", out);
  return out;
}

PrefixSet prefixes(const SeqSetExpr& expr, std::size_t n, const Budget& budget) {
  require_valid(expr);
  return prefixes_impl(expr, n, budget);
}

Count count_prefixes(const SeqSetExpr& expr, std::size_t n, const Budget& budget) {
  require_valid(expr);
  return count_impl(expr, n, budget);
}

std::size_t depth(const SeqSetExpr& expr) {
  return std::visit(Overloaded{
                        [](const nodes::Shift& s) { return 1 + depth(s.inner); },
                        [](const nodes::Dilate& s) { return 1 + depth(s.inner); },
                        [](const nodes::Restrict& s) { return 1 + depth(s.inner); },
                        [](const nodes::Block& s) { return 1 + depth(s.inner); },
                        [](const nodes::Image& s) { return 1 + depth(s.inner); },
                        [](const nodes::Closure& s) { return 1 + depth(s.inner); },
                        [](const nodes::Union& s) { return 1 + std::max(depth(s.left), depth(s.right)); },
                        [](const nodes::DisjointUnion& s) { return 1 + std::max(depth(s.left), depth(s.right)); },
                        [](const nodes::Product& s) { return 1 + std::max(depth(s.left), depth(s.right)); },
                        [](const auto&) -> std::size_t { return 1; },
                    },
                    expr.node().value);
}

}  // namespace topent
