#pragma once

// Separated and spanning counts under sequences of semimetrics, and the
// (eps, n) grid estimator of Bowen entropy on finite samples.

#include "topent/cloud.hpp"
#include "topent/dynamics.hpp"
#include "topent/symbolic.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topent::bowen {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Dense symmetric matrix of pairwise distances at one level n.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t size, double fill = 0.0)
      : size_(size), data_(size * size, fill) {}

  std::size_t size() const { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * size_ + j]; }
  double& at(std::size_t i, std::size_t j) { return data_[i * size_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * size_, size_}; }
  std::span<double> row(std::size_t i) { return {data_.data() + i * size_, size_}; }
  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  double diameter() const;
  /// Smallest strictly positive entry, or +inf if there is none.
  double min_positive() const;

  /// Submatrix on the given indices, in that order.
  DistanceMatrix restricted(std::span<const std::size_t> indices) const;

 private:
  std::size_t size_ = 0;
  std::vector<double> data_;
};

/// Euclidean distances between the points of a cloud.
DistanceMatrix euclidean_matrix(const PointCloud& cloud);

/// Max-pairing semimetric on the product of two point sets; (a, b) is index a * |B| + b.
DistanceMatrix product_matrix(const DistanceMatrix& a, const DistanceMatrix& b);

/// Pointwise c * d.
DistanceMatrix scaled(const DistanceMatrix& d, double c);

/// Symmetry, zero diagonal and the triangle inequality, up to `tol`.
std::vector<std::string> check_semimetric(const DistanceMatrix& d, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Counters. Separation uses d >= eps, spanning uses d < eps.

enum class CountMode { exact, greedy };

const char* to_string(CountMode mode);

class SizeCapExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kDefaultExactCap = 64;

struct CountResult {
  std::size_t value = 0;
  bool exact = false;
  std::vector<std::size_t> witness;  // the separated set or the chosen centers
};

/// N^s: largest eps-separated subset. Exact mode is a branch and bound maximum
/// clique search on the separation graph; greedy mode scans in input order and
/// satisfies N^s(2 eps) <= G <= N^s(eps).
CountResult count_separated(const DistanceMatrix& d, double eps, CountMode mode = CountMode::exact,
                            std::size_t exact_cap = kDefaultExactCap);

/// Smallest set of centers, drawn from `candidates`, with every target at
/// distance < eps from some center. Greedy mode is the usual set-cover
/// heuristic and gives an upper bound. Throws std::invalid_argument if some
/// target cannot be covered.
CountResult count_spanning(const DistanceMatrix& d, double eps, std::span<const std::size_t> targets,
                           std::span<const std::size_t> candidates, CountMode mode = CountMode::exact,
                           std::size_t exact_cap = kDefaultExactCap);

/// N^id: centers drawn from the set itself.
CountResult count_spanning_intrinsic(const DistanceMatrix& d, double eps,
                                     CountMode mode = CountMode::exact,
                                     std::size_t exact_cap = kDefaultExactCap);

/// N^d: points [0, sample_size) form the set, every point is a candidate center.
CountResult count_spanning_ambient(const DistanceMatrix& d, std::size_t sample_size, double eps,
                                   CountMode mode = CountMode::exact,
                                   std::size_t exact_cap = kDefaultExactCap);

// ---------------------------------------------------------------------------
// Semimetric sequences.

using MatrixVisitor = std::function<void(std::size_t n, const DistanceMatrix&)>;

/// gamma_1, gamma_2, ... on a fixed finite point set; n starts at 1.
class SemimetricSeq {
 public:
  virtual ~SemimetricSeq() = default;

  virtual std::size_t size() const = 0;
  virtual double eval(std::size_t n, std::size_t i, std::size_t j) const = 0;
  virtual bool increasing() const = 0;
  /// True when gamma_n does not depend on n.
  virtual bool constant() const { return false; }

  /// Calls `visit` with the full matrix at every n of the ascending list `ns`.
  virtual void sweep(std::span<const std::size_t> ns, const MatrixVisitor& visit) const;

  DistanceMatrix matrix(std::size_t n) const;
};

class FunctionSeq : public SemimetricSeq {
 public:
  using Fn = std::function<double(std::size_t n, std::size_t i, std::size_t j)>;
  FunctionSeq(std::size_t size, Fn fn, bool increasing)
      : size_(size), fn_(std::move(fn)), increasing_(increasing) {}

  std::size_t size() const override { return size_; }
  double eval(std::size_t n, std::size_t i, std::size_t j) const override { return fn_(n, i, j); }
  bool increasing() const override { return increasing_; }

 private:
  std::size_t size_;
  Fn fn_;
  bool increasing_;
};

class ConstantSeq : public SemimetricSeq {
 public:
  explicit ConstantSeq(DistanceMatrix d) : d_(std::move(d)) {}

  std::size_t size() const override { return d_.size(); }
  double eval(std::size_t, std::size_t i, std::size_t j) const override { return d_(i, j); }
  bool increasing() const override { return true; }
  bool constant() const override { return true; }
  void sweep(std::span<const std::size_t> ns, const MatrixVisitor& visit) const override;

 private:
  DistanceMatrix d_;
};

/// Finite sequences (x_0, ..., x_{H-1}) of points in a base space of dimension
/// `dim`. Coordinates are stored step-major so that one step of all sequences
/// is contiguous.
class SeqCloud {
 public:
  SeqCloud(std::size_t count, std::size_t horizon, std::size_t dim);

  std::size_t size() const { return count_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t dim() const { return dim_; }

  double& at(std::size_t i, std::size_t t, std::size_t c) { return data_[(t * dim_ + c) * count_ + i]; }
  double at(std::size_t i, std::size_t t, std::size_t c) const {
    return data_[(t * dim_ + c) * count_ + i];
  }
  /// Coordinate c of every sequence at step t.
  std::span<const double> lane(std::size_t t, std::size_t c) const {
    return {data_.data() + (t * dim_ + c) * count_, count_};
  }
  /// Sequence i as a step-major vector of horizon * dim values.
  std::vector<double> sequence(std::size_t i) const;

  /// The words of a prefix set as symbol sequences (dim 1), horizon = word length.
  static SeqCloud from_prefixes(const PrefixSet& words);

 private:
  std::size_t count_, horizon_, dim_;
  std::vector<double> data_;
};

class OrbitError : public std::runtime_error {
 public:
  OrbitError(const std::string& what, std::vector<std::string> failures)
      : std::runtime_error(what), failures_(std::move(failures)) {}
  const std::vector<std::string>& failures() const { return failures_; }

 private:
  std::vector<std::string> failures_;
};

/// Orbits (x, Tx, ..., T^{H-1} x) of the cloud points. A point whose orbit
/// throws or produces non-finite or wrongly sized values is reported in the
/// thrown OrbitError.
SeqCloud orbit_cloud(const PointMap& map, const PointCloud& cloud, std::size_t horizon);

struct BaseMetric {
  enum class Kind { euclidean, discrete, table };
  Kind kind = Kind::euclidean;
  std::size_t table_size = 0;  // table metric: symbols 0..table_size-1
  std::vector<double> table;   // row-major

  static BaseMetric euclidean() { return {}; }
  static BaseMetric discrete() { return {Kind::discrete, 0, {}}; }
  /// Metric on symbols given by a matrix. Validated as a metric.
  static BaseMetric from_table(std::size_t k, std::vector<double> table);

  double operator()(std::span<const double> x, std::span<const double> y) const;
};

/// d_{n,p}(x, y) = (sum_{t<n} d(x_t, y_t)^p)^{1/p}, and the max over t for p = inf.
/// x and y are step-major with `dim` values per step.
double dnp(const BaseMetric& d, std::span<const double> x, std::span<const double> y, std::size_t n,
           double p, std::size_t dim = 1);

/// Delta_p = (d_{n,p})_n on a SeqCloud. `sweep` advances all pairs one step
/// at a time with the SIMD kernels.
class DnpSeq : public SemimetricSeq {
 public:
  DnpSeq(std::shared_ptr<const SeqCloud> cloud, BaseMetric metric, double p);

  std::size_t size() const override { return cloud_->size(); }
  double eval(std::size_t n, std::size_t i, std::size_t j) const override;
  bool increasing() const override { return true; }
  bool constant() const override { return constant_; }
  void sweep(std::span<const std::size_t> ns, const MatrixVisitor& visit) const override;

  const SeqCloud& cloud() const { return *cloud_; }
  double p() const { return p_; }
  const BaseMetric& metric() const { return metric_; }

 private:
  std::shared_ptr<const SeqCloud> cloud_;
  BaseMetric metric_;
  double p_;
  bool constant_ = false;  // p = inf and every sequence is stationary
};

// ---------------------------------------------------------------------------
// Grid estimator.

enum class CounterKind { separated, intrinsic_spanning, ambient_spanning };

const char* to_string(CounterKind kind);

struct GridConfig {
  std::vector<double> eps;          // empty: diameter * 2^-1 .. 2^-10
  std::vector<std::size_t> ns;      // ascending, n >= 1
  CounterKind counter = CounterKind::separated;
  CountMode mode = CountMode::greedy;
  double tolerance = 0.05;          // stabilization threshold, nats
  std::size_t window = 0;           // tail length over ns; 0 -> ceil(|ns| / 3)
  std::size_t exact_cap = kDefaultExactCap;
  std::size_t sample_size = 0;      // ambient spanning: the set is [0, sample_size)
};

/// diameter * 2^-lo .. 2^-hi, descending.
std::vector<double> geometric_eps_grid(double diameter, int lo = 1, int hi = 10);

struct BowenEstimate {
  CounterKind counter = CounterKind::separated;
  CountMode mode = CountMode::greedy;
  std::vector<double> eps;                      // descending
  std::vector<std::size_t> ns;                  // ascending
  std::vector<std::vector<std::size_t>> counts; // [eps][n], after monotone closure in greedy mode
  std::vector<std::vector<std::size_t>> raw_counts;
  std::vector<std::vector<double>> rates;       // log(count) / n
  std::vector<double> tail;                     // per-eps max rate over the last `window` ns
  std::size_t window = 0;

  double value = 0.0;
  std::size_t value_index = 0;  // eps index of the reported tail value
  bool stabilized = false;
  double grid_value = 0.0;      // value read off the grid alone
  std::string method;           // "grid", "constant-sequence" or "eventually-constant"
};

/// Fills the count grid and reports the tail value at the smallest eps whose
/// change from the next coarser eps is below the tolerance; with no such eps
/// the finest tail value is reported and `stabilized` is false. A constant
/// sequence has value 0 exactly; the grid is still reported.
/// Throws std::invalid_argument on an empty n grid or an invalid config.
BowenEstimate bowen_entropy(const SemimetricSeq& seq, const GridConfig& cfg);

/// h_{d,p}(T) on a sample: orbits of length `horizon` fed through d_{n,p}.
/// With p = inf and every sampled orbit reaching a fixed point of T within the
/// horizon, the semimetrics are eventually constant and the value is 0.
BowenEstimate map_bowen_entropy(const PointMap& map, const PointCloud& cloud,
                                const BaseMetric& metric, double p, std::size_t horizon,
                                GridConfig cfg);

/// CSV rows eps,n,count,a_n in grid order.
void write_grid_csv(std::ostream& out, const BowenEstimate& est);

}  // namespace topent::bowen
