#pragma once

// Coding maps onto [0,1] and onto self-similar attractors, and the prefix
// sets of preimages of subsets under them.

#include "topent/rational.hpp"
#include "topent/symbolic.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace topent::fractal {

/// Base-k digits of x in [0,1], lower representation: the cylinder of the
/// word with value j is (j k^-n, (j+1) k^-n], and 0 codes as 000...
/// At ambiguous points the non-terminating expansion wins (1/2 -> 0111...).
struct DigitCoding {
  std::uint32_t base = 2;
};

Word lower_digits(const Rational& x, std::uint32_t base, std::size_t n);
Word lower_digits(double x, std::uint32_t base, std::size_t n);

/// Value of a digit word read as a base-k integer.
Count word_index(const Word& w, std::uint32_t base);

struct FractalSubset {
  enum class Kind { whole, rationals, irrationals, cantor, intervals, predicate };

  Kind kind = Kind::whole;
  std::vector<std::pair<Rational, Rational>> intervals;  // closed, lo <= hi
  std::function<bool(double)> predicate;
  double delta = 1e-9;
  std::size_t samples = std::size_t{1} << 16;  // predicate sampling resolution
  std::string description;

  static FractalSubset whole_interval();
  static FractalSubset rationals();
  static FractalSubset irrationals();
  /// Middle-thirds Cantor set; base 3 only.
  static FractalSubset cantor();
  static FractalSubset interval_union(std::vector<std::pair<Rational, Rational>> parts);
  /// Level-m closed approximation of the Cantor set (2^m intervals).
  static FractalSubset cantor_level(std::size_t m);
  static FractalSubset from_predicate(std::function<bool(double)> pred, double delta,
                                      std::string description = "predicate");
};

/// Digit words of length n whose cylinder meets the set.
///
/// whole, rationals, irrationals: every word. cantor: words over {0, 2},
/// without the endpoint words that the lower representation would add.
/// intervals: exact under the lower representation.
/// predicate: outer approximation; a word is kept when some sample point
/// satisfying the predicate lies within delta of its closed cylinder.
PrefixSet digit_prefixes(const FractalSubset& set, const DigitCoding& coding, std::size_t n,
                         const Budget& budget = {});

/// The sequence set of an exactly coded subset, when there is one.
std::optional<SeqSetExpr> digit_seqset(const FractalSubset& set, const DigitCoding& coding);

// ---------------------------------------------------------------------------

struct AffineMap {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd offset;
  std::optional<double> declared_ratio;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return matrix * x + offset; }
};

/// Contractions f_1..f_N on R^d. Ratios are the operator norms (largest
/// singular value) unless a larger declared ratio is given.
class IfsSystem {
 public:
  /// Throws std::invalid_argument for an empty family, mismatched dimensions,
  /// a declared ratio below the operator norm, or a ratio >= 1.
  explicit IfsSystem(std::vector<AffineMap> maps);

  /// {"dimension": d, "maps": [{"matrix": [[...]], "offset": [...], "ratio": r?}, ...]}
  static IfsSystem from_json(const std::string& text);
  static IfsSystem cantor();

  std::size_t size() const { return maps_.size(); }
  std::size_t dim() const { return dim_; }
  const AffineMap& map(std::size_t i) const { return maps_[i]; }
  double ratio(std::size_t i) const { return ratios_[i]; }
  double max_ratio() const;

  Eigen::VectorXd fixed_point(std::size_t i) const;
  /// rho with f_i(B(seed, rho)) inside B(seed, rho) for every i.
  double invariant_radius(const Eigen::VectorXd& seed) const;

 private:
  std::size_t dim_ = 0;
  std::vector<AffineMap> maps_;
  std::vector<double> ratios_;
};

struct CodedPoint {
  Eigen::VectorXd point;
  double radius = 0.0;  // f_w(attractor) lies within this distance of `point`
};

/// f_{w_0} o ... o f_{w_{n-1}} (seed).
CodedPoint ifs_pi(const IfsSystem& sys, const Word& word, const Eigen::VectorXd& seed);
/// The same with the first `depth` symbols of an eventually periodic sequence.
CodedPoint ifs_pi(const IfsSystem& sys, const PeriodicSequence& seq, const Eigen::VectorXd& seed,
                  std::size_t depth);

struct AmbientSubset {
  enum class Kind { attractor, points };

  Kind kind = Kind::attractor;
  std::vector<Eigen::VectorXd> points;
  double delta = 1e-12;
  std::string description;

  static AmbientSubset attractor();
  static AmbientSubset finite(std::vector<Eigen::VectorXd> points, double delta = 1e-12);
  /// Attractor points f_w(fixed point of f_0), |w| = depth, that satisfy the predicate.
  static AmbientSubset sampled(const IfsSystem& sys, const std::function<bool(const Eigen::VectorXd&)>& pred,
                               std::size_t depth, double delta);
};

/// Words w of length n whose ball around pi(w) meets the set within delta.
/// An upper bound on the prefix count of the true preimage.
PrefixSet ifs_preimage_prefixes(const IfsSystem& sys, const AmbientSubset& set, std::size_t n,
                                const Budget& budget = {});

}  // namespace topent::fractal
