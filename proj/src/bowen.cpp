#include "topent/bowen.hpp"
#include "topent/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace topent::bowen {

void SemimetricSeq::sweep(std::span<const std::size_t> ns, const MatrixVisitor& visit) const {
  DistanceMatrix d(size());
  for (std::size_t n : ns) {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = 0; j < size(); ++j) d.at(i, j) = eval(n, i, j);
    visit(n, d);
  }
}

DistanceMatrix SemimetricSeq::matrix(std::size_t n) const {
  DistanceMatrix out;
  const std::size_t ns[] = {n};
  sweep(ns, [&](std::size_t, const DistanceMatrix& d) { out = d; });
  return out;
}

void ConstantSeq::sweep(std::span<const std::size_t> ns, const MatrixVisitor& visit) const {
  for (std::size_t n : ns) visit(n, d_);
}

SeqCloud::SeqCloud(std::size_t count, std::size_t horizon, std::size_t dim)
    : count_(count), horizon_(horizon), dim_(dim), data_(count * horizon * dim, 0.0) {
  if (dim == 0) throw std::invalid_argument("sequence cloud: dimension must be positive");
}

std::vector<double> SeqCloud::sequence(std::size_t i) const {
  std::vector<double> out(horizon_ * dim_);
  for (std::size_t t = 0; t < horizon_; ++t)
    for (std::size_t c = 0; c < dim_; ++c) out[t * dim_ + c] = at(i, t, c);
  return out;
}

SeqCloud SeqCloud::from_prefixes(const PrefixSet& words) {
  SeqCloud cloud(words.size(), words.length, 1);
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t t = 0; t < words.length; ++t) cloud.at(i, t, 0) = double(words.words[i][t]);
  return cloud;
}

namespace {

struct Orbits {
  SeqCloud cloud;
  bool all_reach_fixed_point = true;
};

Orbits compute_orbits(const PointMap& map, const PointCloud& points, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("orbit cloud: horizon must be positive");
  const std::size_t dim = points.dim();
  Orbits out{SeqCloud(points.size(), horizon, dim)};
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> x(points.point(i).begin(), points.point(i).end());
    bool fixed = false;
    try {
      for (std::size_t t = 0; t < horizon; ++t) {
        for (std::size_t c = 0; c < dim; ++c) out.cloud.at(i, t, c) = x[c];
        std::vector<double> y = map(x);
        if (y.size() != dim) throw std::runtime_error("map returned a point of the wrong dimension");
        for (double v : y)
          if (!std::isfinite(v)) throw std::runtime_error("map returned a non-finite value");
        fixed = fixed || y == x;
        x = std::move(y);
      }
    } catch (const std::exception& e) {
      if (failures.size() < 20) failures.push_back("point " + std::to_string(i) + ": " + e.what());
      continue;
    }
    out.all_reach_fixed_point = out.all_reach_fixed_point && fixed;
  }
  if (!failures.empty())
    throw OrbitError("orbit evaluation failed for " + std::to_string(failures.size()) + " point(s)",
                     std::move(failures));
  return out;
}

bool is_infinite_p(double p) { return std::isinf(p) && p > 0; }

void check_p(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("d_{n,p}: p must be >= 1 or inf");
}

// one step of d on sequences stored step-major
double base_step(const BaseMetric& d, const double* x, const double* y, std::size_t dim) {
  switch (d.kind) {
    case BaseMetric::Kind::euclidean: {
      if (dim == 1) return std::fabs(x[0] - y[0]);
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = x[c] - y[c];
        const double sq = diff * diff;
        s = s + sq;
      }
      return std::sqrt(s);
    }
    case BaseMetric::Kind::discrete: {
      double m = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double v = x[c] != y[c] ? 1.0 : 0.0;
        m = v > m ? v : m;
      }
      return m;
    }
    case BaseMetric::Kind::table:
      return d.table[static_cast<std::size_t>(x[0]) * d.table_size + static_cast<std::size_t>(y[0])];
  }
  return 0.0;
}

}  // namespace

SeqCloud orbit_cloud(const PointMap& map, const PointCloud& cloud, std::size_t horizon) {
  return compute_orbits(map, cloud, horizon).cloud;
}

BaseMetric BaseMetric::from_table(std::size_t k, std::vector<double> table) {
  if (k == 0 || table.size() != k * k)
    throw std::invalid_argument("metric table: expected a k x k matrix");
  DistanceMatrix d(k);
  d.data() = table;
  if (auto issues = check_semimetric(d, 1e-12); !issues.empty())
    throw std::invalid_argument("metric table: " + issues.front());
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && d(i, j) <= 0.0) throw std::invalid_argument("metric table: distinct symbols at distance 0");
  return {Kind::table, k, std::move(table)};
}

double BaseMetric::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("metric: dimension mismatch");
  return base_step(*this, x.data(), y.data(), x.size());
}

double dnp(const BaseMetric& d, std::span<const double> x, std::span<const double> y, std::size_t n,
           double p, std::size_t dim) {
  check_p(p);
  if (dim == 0 || x.size() < n * dim || y.size() < n * dim)
    throw std::invalid_argument("d_{n,p}: sequences shorter than n");
  double acc = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double b = base_step(d, x.data() + t * dim, y.data() + t * dim, dim);
    if (is_infinite_p(p)) {
      acc = b > acc ? b : acc;
    } else if (p == 1.0) {
      acc = acc + b;
    } else if (p == 2.0) {
      const double sq = b * b;
      acc = acc + sq;
    } else {
      acc = acc + std::pow(b, p);
    }
  }
  if (is_infinite_p(p) || p == 1.0) return acc;
  if (p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / p);
}

DnpSeq::DnpSeq(std::shared_ptr<const SeqCloud> cloud, BaseMetric metric, double p)
    : cloud_(std::move(cloud)), metric_(std::move(metric)), p_(p) {
  check_p(p);
  if (!cloud_) throw std::invalid_argument("d_{n,p}: null cloud");
  if (metric_.kind == BaseMetric::Kind::table) {
    if (cloud_->dim() != 1) throw std::invalid_argument("d_{n,p}: table metric needs dimension 1");
    for (std::size_t t = 0; t < cloud_->horizon(); ++t)
      for (double v : cloud_->lane(t, 0))
        if (v < 0 || v != std::floor(v) || v >= double(metric_.table_size))
          throw std::invalid_argument("d_{n,p}: symbol outside the metric table");
  }
  if (is_infinite_p(p)) {
    constant_ = true;
    for (std::size_t t = 1; t < cloud_->horizon() && constant_; ++t)
      for (std::size_t c = 0; c < cloud_->dim() && constant_; ++c)
        constant_ = std::ranges::equal(cloud_->lane(t, c), cloud_->lane(0, c));
  }
}

double DnpSeq::eval(std::size_t n, std::size_t i, std::size_t j) const {
  if (n == 0 || n > cloud_->horizon()) throw std::out_of_range("d_{n,p}: n outside [1, horizon]");
  const auto x = cloud_->sequence(i), y = cloud_->sequence(j);
  return dnp(metric_, x, y, n, p_, cloud_->dim());
}

void DnpSeq::sweep(std::span<const std::size_t> ns, const MatrixVisitor& visit) const {
  if (ns.empty()) return;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    if (ns[k] == 0 || ns[k] > cloud_->horizon())
      throw std::out_of_range("d_{n,p}: n outside [1, horizon]");
    if (k > 0 && ns[k] < ns[k - 1]) throw std::invalid_argument("d_{n,p}: sweep needs ascending n");
  }
  const std::size_t count = cloud_->size(), dim = cloud_->dim();
  const auto& kern = simd::active();
  const bool inf = is_infinite_p(p_);
  const bool finalize_needed = !inf && p_ != 1.0;

  DistanceMatrix acc(count, 0.0), out;
  if (finalize_needed) out = DistanceMatrix(count);
  std::vector<double> base(count), scratch(count);
  std::size_t next = 0;

  for (std::size_t t = 0; t < ns.back(); ++t) {
    for (std::size_t i = 0; i < count; ++i) {
      switch (metric_.kind) {
        case BaseMetric::Kind::euclidean:
          if (dim == 1) {
            const auto lane = cloud_->lane(t, 0);
            kern.abs_diff(lane[i], lane.data(), base.data(), count);
          } else {
            std::fill(base.begin(), base.end(), 0.0);
            for (std::size_t c = 0; c < dim; ++c) {
              const auto lane = cloud_->lane(t, c);
              kern.sq_diff_acc(lane[i], lane.data(), base.data(), count);
            }
            kern.sqrt_inplace(base.data(), count);
          }
          break;
        case BaseMetric::Kind::discrete:
          if (dim == 1) {
            const auto lane = cloud_->lane(t, 0);
            kern.not_equal(lane[i], lane.data(), base.data(), count);
          } else {
            std::fill(base.begin(), base.end(), 0.0);
            for (std::size_t c = 0; c < dim; ++c) {
              const auto lane = cloud_->lane(t, c);
              kern.not_equal(lane[i], lane.data(), scratch.data(), count);
              kern.max_acc(scratch.data(), base.data(), count);
            }
          }
          break;
        case BaseMetric::Kind::table: {
          const auto lane = cloud_->lane(t, 0);
          const double* row = metric_.table.data() + static_cast<std::size_t>(lane[i]) * metric_.table_size;
          for (std::size_t j = 0; j < count; ++j) base[j] = row[static_cast<std::size_t>(lane[j])];
          break;
        }
      }
      double* a = acc.row(i).data();
      if (inf) {
        kern.max_acc(base.data(), a, count);
      } else if (p_ == 1.0) {
        kern.sum_acc(base.data(), a, count);
      } else if (p_ == 2.0) {
        kern.sum_sq_acc(base.data(), a, count);
      } else {
        for (double& v : base) v = std::pow(v, p_);
        kern.sum_acc(base.data(), a, count);
      }
    }
    const std::size_t n = t + 1;
    while (next < ns.size() && ns[next] == n) {
      if (!finalize_needed) {
        visit(n, acc);
      } else {
        out.data() = acc.data();
        if (p_ == 2.0) {
          kern.sqrt_inplace(out.data().data(), out.data().size());
        } else {
          for (double& v : out.data()) v = std::pow(v, 1.0 / p_);
        }
        visit(n, out);
      }
      ++next;
    }
  }
}

// ---------------------------------------------------------------------------

const char* to_string(CounterKind kind) {
  switch (kind) {
    case CounterKind::separated: return "separated";
    case CounterKind::intrinsic_spanning: return "intrinsic-spanning";
    case CounterKind::ambient_spanning: return "ambient-spanning";
  }
  return "?";
}

std::vector<double> geometric_eps_grid(double diameter, int lo, int hi) {
  if (!(diameter > 0.0)) throw std::invalid_argument("eps grid: diameter must be positive");
  if (lo > hi) throw std::invalid_argument("eps grid: empty exponent range");
  std::vector<double> eps;
  for (int e = lo; e <= hi; ++e) eps.push_back(std::ldexp(diameter, -e));
  return eps;
}

namespace {

void check_config(const SemimetricSeq& seq, const GridConfig& cfg) {
  if (seq.size() == 0) throw std::invalid_argument("bowen: empty point set");
  if (cfg.ns.empty()) throw std::invalid_argument("bowen: empty n grid");
  for (std::size_t k = 0; k < cfg.ns.size(); ++k) {
    if (cfg.ns[k] == 0) throw std::invalid_argument("bowen: n must be >= 1");
    if (k > 0 && cfg.ns[k] <= cfg.ns[k - 1])
      throw std::invalid_argument("bowen: n grid must be strictly ascending");
  }
  for (double e : cfg.eps)
    if (!(e > 0.0)) throw std::invalid_argument("bowen: eps values must be positive");
  if (!(cfg.tolerance >= 0.0)) throw std::invalid_argument("bowen: negative tolerance");
  if (cfg.counter == CounterKind::ambient_spanning &&
      (cfg.sample_size == 0 || cfg.sample_size > seq.size()))
    throw std::invalid_argument("bowen: ambient spanning needs 0 < sample_size <= number of points");
}

std::vector<double> default_eps(const SemimetricSeq& seq, const GridConfig& cfg) {
  double diameter = 0.0;
  const std::size_t first[] = {cfg.ns.front()};
  seq.sweep(first, [&](std::size_t, const DistanceMatrix& d) { diameter = d.diameter(); });
  if (diameter == 0.0 && cfg.ns.size() > 1) {
    const std::size_t last[] = {cfg.ns.back()};
    seq.sweep(last, [&](std::size_t, const DistanceMatrix& d) { diameter = d.diameter(); });
  }
  if (diameter == 0.0) return {1.0};
  return geometric_eps_grid(diameter);
}

std::size_t count_one(const DistanceMatrix& d, double eps, const GridConfig& cfg) {
  switch (cfg.counter) {
    case CounterKind::separated: return count_separated(d, eps, cfg.mode, cfg.exact_cap).value;
    case CounterKind::intrinsic_spanning:
      return count_spanning_intrinsic(d, eps, cfg.mode, cfg.exact_cap).value;
    case CounterKind::ambient_spanning:
      return count_spanning_ambient(d, cfg.sample_size, eps, cfg.mode, cfg.exact_cap).value;
  }
  return 0;
}

}  // namespace

BowenEstimate bowen_entropy(const SemimetricSeq& seq, const GridConfig& cfg) {
  check_config(seq, cfg);
  BowenEstimate est;
  est.counter = cfg.counter;
  est.mode = cfg.mode;
  est.ns = cfg.ns;
  est.eps = cfg.eps.empty() ? default_eps(seq, cfg) : cfg.eps;
  std::sort(est.eps.begin(), est.eps.end(), std::greater<>());
  est.eps.erase(std::unique(est.eps.begin(), est.eps.end()), est.eps.end());

  const std::size_t ne = est.eps.size(), nn = est.ns.size();
  est.raw_counts.assign(ne, std::vector<std::size_t>(nn, 0));
  std::size_t col = 0;
  seq.sweep(est.ns, [&](std::size_t, const DistanceMatrix& d) {
    for (std::size_t e = 0; e < ne; ++e) est.raw_counts[e][col] = count_one(d, est.eps[e], cfg);
    ++col;
  });

  // Greedy counts are bounds, not values. Separated counts are lower bounds
  // and spanning counts upper bounds; closing them monotonically in eps (and
  // in n for increasing sequences) only tightens them.
  est.counts = est.raw_counts;
  if (cfg.mode == CountMode::greedy) {
    const bool inc = seq.increasing();
    if (cfg.counter == CounterKind::separated) {
      for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t k = 0; k < nn; ++k) {
          auto& c = est.counts[e][k];
          if (e > 0) c = std::max(c, est.counts[e - 1][k]);
          if (inc && k > 0) c = std::max(c, est.counts[e][k - 1]);
        }
    } else {
      for (std::size_t e = ne; e-- > 0;)
        for (std::size_t k = nn; k-- > 0;) {
          auto& c = est.counts[e][k];
          if (e + 1 < ne) c = std::min(c, est.counts[e + 1][k]);
          if (inc && k + 1 < nn) c = std::min(c, est.counts[e][k + 1]);
        }
    }
  }

  est.window = cfg.window == 0 ? (nn + 2) / 3 : std::min(cfg.window, nn);
  est.rates.assign(ne, std::vector<double>(nn, 0.0));
  est.tail.assign(ne, 0.0);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t k = 0; k < nn; ++k)
      est.rates[e][k] = std::log(double(est.counts[e][k])) / double(est.ns[k]);
    est.tail[e] = *std::max_element(est.rates[e].end() - std::ptrdiff_t(est.window), est.rates[e].end());
  }

  est.value_index = ne - 1;
  for (std::size_t e = ne; e-- > 1;) {
    if (std::fabs(est.tail[e] - est.tail[e - 1]) < cfg.tolerance) {
      est.value_index = e;
      est.stabilized = true;
      break;
    }
  }
  est.grid_value = est.tail[est.value_index];
  if (seq.constant()) {
    est.value = 0.0;
    est.method = "constant-sequence";
  } else {
    est.value = est.grid_value;
    est.method = "grid";
  }
  return est;
}

BowenEstimate map_bowen_entropy(const PointMap& map, const PointCloud& cloud,
                                const BaseMetric& metric, double p, std::size_t horizon,
                                GridConfig cfg) {
  check_p(p);
  auto orbits = compute_orbits(map, cloud, horizon);
  if (cfg.ns.empty())
    for (std::size_t n = 1; n <= horizon; ++n) cfg.ns.push_back(n);
  const bool eventually_constant = is_infinite_p(p) && orbits.all_reach_fixed_point;
  DnpSeq seq(std::make_shared<const SeqCloud>(std::move(orbits.cloud)), metric, p);
  BowenEstimate est = bowen_entropy(seq, cfg);
  if (est.method == "grid" && eventually_constant) {
    // d_{n,inf} stops changing once every orbit sits at its fixed point
    est.value = 0.0;
    est.method = "eventually-constant";
  }
  return est;
}

void write_grid_csv(std::ostream& out, const BowenEstimate& est) {
  out << "eps,n,count,a_n\n";
  char buf[64];
  for (std::size_t e = 0; e < est.eps.size(); ++e) {
    for (std::size_t k = 0; k < est.ns.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.12g", est.eps[e]);
      out << buf << ',' << est.ns[k] << ',' << est.counts[e][k] << ',';
      std::snprintf(buf, sizeof buf, "%.12g", est.rates[e][k]);
      out << buf << '\n';
    }
  }
}

}  // namespace topent::bowen
