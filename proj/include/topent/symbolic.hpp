#pragma once

// Sequence sets over finite alphabets and their prefix counts.
//
// On a finite discrete alphabet the singleton cover refines every other open
// cover, so the cover number N(S, U^n) of a sequence set S is the number of
// distinct length-n prefixes of S. Every operation here works at that level:
// a SeqSetExpr denotes a nonempty subset of X^N and `prefixes` returns its
// length-n prefix language exactly.

#include "topent/count.hpp"
#include "topent/rational.hpp"
#include "topent/schedule.hpp"

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace topent {

using Word = std::vector<Symbol>;
using SymbolSet = std::vector<Symbol>;  // sorted, unique

struct Alphabet {
  std::uint32_t size = 1;
  std::vector<std::string> labels;  // optional, one per symbol

  std::vector<std::string> check() const;
  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

/// Length-n prefixes of a sequence set, in lexicographic order.
struct PrefixSet {
  Alphabet alphabet;
  std::size_t length = 0;
  std::vector<Word> words;

  std::size_t size() const { return words.size(); }
  bool contains(const Word& w) const;
};

template <class T>
struct EventuallyPeriodic {
  std::vector<T> prefix;
  std::vector<T> period;  // nonempty

  const T& at(std::size_t i) const {
    if (i < prefix.size()) return prefix[i];
    return period[(i - prefix.size()) % period.size()];
  }
  friend bool operator==(const EventuallyPeriodic&, const EventuallyPeriodic&) = default;
};

using PeriodicSequence = EventuallyPeriodic<Symbol>;
using SubsetSequence = EventuallyPeriodic<SymbolSet>;

/// Total self-map of an alphabet {0..k-1}; k = table.size().
struct FiniteMap {
  std::vector<Symbol> table;

  std::uint32_t size() const { return static_cast<std::uint32_t>(table.size()); }
  Symbol operator()(Symbol x) const { return table.at(x); }
  friend bool operator==(const FiniteMap&, const FiniteMap&) = default;
};

/// Set-valued map; every symbol needs at least one successor.
struct TransitionRelation {
  std::vector<SymbolSet> successors;

  std::uint32_t size() const { return static_cast<std::uint32_t>(successors.size()); }
  friend bool operator==(const TransitionRelation&, const TransitionRelation&) = default;
};

/// Coordinatewise symbol map between alphabets.
struct SymbolMap {
  std::vector<Symbol> table;
  std::uint32_t target_size = 1;
  friend bool operator==(const SymbolMap&, const SymbolMap&) = default;
};

struct BlockPlan {
  BlockSchedule schedule;
  Symbol z = 0;
  friend bool operator==(const BlockPlan&, const BlockPlan&) = default;
};

using CylinderSchedule = std::variant<SubsetSequence, BlockPlan>;

/// Cap on materialized prefix sets. Closed-form counts ignore it.
struct Budget {
  std::uint64_t max_words = std::uint64_t{1} << 24;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExprNode;

/// Immutable, shared expression tree describing a subset of X^N.
class SeqSetExpr {
 public:
  explicit SeqSetExpr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}

  const ExprNode& node() const { return *node_; }
  std::uint32_t alphabet_size() const;

  template <class T>
  const T* as() const;

  friend bool operator==(const SeqSetExpr& a, const SeqSetExpr& b);

 private:
  std::shared_ptr<const ExprNode> node_;
};

namespace nodes {

struct FullShift {
  std::uint32_t k = 1;
  friend bool operator==(const FullShift&, const FullShift&) = default;
};
/// Sequences that are eventually constant equal to z.
struct EvConst {
  std::uint32_t k = 1;
  Symbol z = 0;
  friend bool operator==(const EvConst&, const EvConst&) = default;
};
/// Product of coordinate subsets Z_0 x Z_1 x ...
struct CylSched {
  std::uint32_t k = 1;
  CylinderSchedule schedule;
  friend bool operator==(const CylSched&, const CylSched&) = default;
};
/// The frozen/free construction with entropy r log k.
struct SRSet {
  std::uint32_t k = 1;
  Symbol z = 0;
  Rational r{1};
  friend bool operator==(const SRSet&, const SRSet&) = default;
};
struct Orbit {
  FiniteMap map;
  friend bool operator==(const Orbit&, const Orbit&) = default;
};
struct OrbitSV {
  TransitionRelation relation;
  friend bool operator==(const OrbitSV&, const OrbitSV&) = default;
};
struct Shift {
  std::size_t k = 1;
  SeqSetExpr inner;
  friend bool operator==(const Shift&, const Shift&) = default;
};
struct Dilate {
  std::size_t k = 2;
  SeqSetExpr inner;
  friend bool operator==(const Dilate&, const Dilate&) = default;
};
struct Restrict {
  std::size_t k = 1;
  SeqSetExpr inner;
  friend bool operator==(const Restrict&, const Restrict&) = default;
};
struct Block {
  std::size_t k = 2;
  SeqSetExpr inner;
  friend bool operator==(const Block&, const Block&) = default;
};
struct Union {
  SeqSetExpr left, right;
  friend bool operator==(const Union&, const Union&) = default;
};
/// Right symbols are offset by the left alphabet size.
struct DisjointUnion {
  SeqSetExpr left, right;
  friend bool operator==(const DisjointUnion&, const DisjointUnion&) = default;
};
/// Pair (a, b) is encoded as a * k_right + b.
struct Product {
  SeqSetExpr left, right;
  friend bool operator==(const Product&, const Product&) = default;
};
struct Image {
  SymbolMap map;
  SeqSetExpr inner;
  friend bool operator==(const Image&, const Image&) = default;
};
struct FiniteSet {
  std::uint32_t k = 1;
  std::vector<PeriodicSequence> sequences;
  friend bool operator==(const FiniteSet&, const FiniteSet&) = default;
};
/// Topological closure; identical prefix language on a finite alphabet.
struct Closure {
  SeqSetExpr inner;
  friend bool operator==(const Closure&, const Closure&) = default;
};

}  // namespace nodes

using NodeVariant =
    std::variant<nodes::FullShift, nodes::EvConst, nodes::CylSched, nodes::SRSet, nodes::Orbit,
                 nodes::OrbitSV, nodes::Shift, nodes::Dilate, nodes::Restrict, nodes::Block,
                 nodes::Union, nodes::DisjointUnion, nodes::Product, nodes::Image,
                 nodes::FiniteSet, nodes::Closure>;

struct ExprNode {
  NodeVariant value;
  std::uint32_t alphabet_size = 1;
};

inline std::uint32_t SeqSetExpr::alphabet_size() const { return node_->alphabet_size; }

template <class T>
const T* SeqSetExpr::as() const {
  return std::get_if<T>(&node_->value);
}

// Constructors. They never throw on bad parameters; `validate` reports them.
SeqSetExpr full_shift(std::uint32_t k);
SeqSetExpr ev_const(std::uint32_t k, Symbol z);
SeqSetExpr cyl_sched(std::uint32_t k, SubsetSequence subsets);
SeqSetExpr cyl_sched(std::uint32_t k, BlockPlan plan);
SeqSetExpr sr_set(std::uint32_t k, Rational r, Symbol z = 0);
SeqSetExpr orbit(FiniteMap map);
SeqSetExpr orbit_sv(TransitionRelation relation);
SeqSetExpr shift(std::size_t k, SeqSetExpr inner);
SeqSetExpr dilate(std::size_t k, SeqSetExpr inner);
SeqSetExpr restriction(std::size_t k, SeqSetExpr inner);
SeqSetExpr block(std::size_t k, SeqSetExpr inner);
SeqSetExpr unite(SeqSetExpr left, SeqSetExpr right);
SeqSetExpr disjoint_union(SeqSetExpr left, SeqSetExpr right);
SeqSetExpr product(SeqSetExpr left, SeqSetExpr right);
SeqSetExpr image(SymbolMap map, SeqSetExpr inner);
SeqSetExpr finite_set(std::uint32_t k, std::vector<PeriodicSequence> sequences);
SeqSetExpr closure(SeqSetExpr inner);

/// Structural diagnostics; empty iff the expression is well formed.
std::vector<std::string> validate(const SeqSetExpr& expr);

/// Exactly the length-n prefixes of the denoted set.
/// Throws std::invalid_argument on a malformed expression and BudgetExceeded
/// when a materialized set would exceed the budget.
PrefixSet prefixes(const SeqSetExpr& expr, std::size_t n, const Budget& budget = {});

/// |prefixes(expr, n)|, through closed forms where they exist.
Count count_prefixes(const SeqSetExpr& expr, std::size_t n, const Budget& budget = {});

/// Number of nodes on the longest root-to-leaf path.
std::size_t depth(const SeqSetExpr& expr);

}  // namespace topent
