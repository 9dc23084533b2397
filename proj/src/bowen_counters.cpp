#include "topent/bowen.hpp"
#include "topent/simd/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace topent::bowen {

double DistanceMatrix::diameter() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, v);
  return m;
}

double DistanceMatrix::min_positive() const {
  double m = kInfinity;
  for (double v : data_)
    if (v > 0.0) m = std::min(m, v);
  return m;
}

DistanceMatrix DistanceMatrix::restricted(std::span<const std::size_t> indices) const {
  DistanceMatrix out(indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a)
    for (std::size_t b = 0; b < indices.size(); ++b) out.at(a, b) = (*this)(indices[a], indices[b]);
  return out;
}

DistanceMatrix euclidean_matrix(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  DistanceMatrix d(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto x = cloud.point(i), y = cloud.point(j);
      double s = 0.0;
      for (std::size_t c = 0; c < cloud.dim(); ++c) s += (x[c] - y[c]) * (x[c] - y[c]);
      d.at(i, j) = d.at(j, i) = std::sqrt(s);
    }
  }
  return d;
}

DistanceMatrix product_matrix(const DistanceMatrix& a, const DistanceMatrix& b) {
  const std::size_t na = a.size(), nb = b.size();
  DistanceMatrix d(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t k = 0; k < na; ++k)
        for (std::size_t l = 0; l < nb; ++l) d.at(i * nb + j, k * nb + l) = std::max(a(i, k), b(j, l));
  return d;
}

DistanceMatrix scaled(const DistanceMatrix& d, double c) {
  DistanceMatrix out = d;
  for (double& v : out.data()) v *= c;
  return out;
}

std::vector<std::string> check_semimetric(const DistanceMatrix& d, double tol) {
  std::vector<std::string> issues;
  const std::size_t n = d.size();
  auto report = [&](std::string s) {
    if (issues.size() < 20) issues.push_back(std::move(s));
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(d(i, i)) > tol) report("nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) < 0.0 || !std::isfinite(d(i, j)))
        report("invalid value at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (std::fabs(d(i, j) - d(j, i)) > tol)
        report("asymmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (d(i, k) > d(i, j) + d(j, k) + tol)
          report("triangle inequality fails for (" + std::to_string(i) + "," + std::to_string(j) +
                 "," + std::to_string(k) + ")");
  return issues;
}

const char* to_string(CountMode mode) { return mode == CountMode::exact ? "exact" : "greedy"; }

namespace {

void require_eps(double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("counter: eps must be positive");
}

void require_cap(std::size_t n, std::size_t cap, const char* what) {
  const std::size_t limit = std::min<std::size_t>(cap, 64);
  if (n > limit) {
    std::ostringstream m;
    m << what << ": exact search supports at most " << limit << " points, got " << n;
    throw SizeCapExceeded(m.str());
  }
}

using Mask = std::uint64_t;

constexpr Mask bit(std::size_t i) { return Mask{1} << i; }

// Maximum clique with greedy-colouring bounds.
class CliqueSearch {
 public:
  explicit CliqueSearch(std::vector<Mask> adj) : adj_(std::move(adj)) {}

  std::vector<std::size_t> run() {
    Mask all = adj_.size() == 64 ? ~Mask{0} : bit(adj_.size()) - 1;
    std::vector<std::size_t> current;
    expand(current, all);
    return best_;
  }

 private:
  void expand(std::vector<std::size_t>& current, Mask p) {
    std::vector<std::size_t> order, colour;
    Mask uncoloured = p;
    std::size_t c = 0;
    while (uncoloured) {
      ++c;
      Mask q = uncoloured;
      while (q) {
        const auto v = static_cast<std::size_t>(std::countr_zero(q));
        q &= ~bit(v);
        q &= ~adj_[v];
        uncoloured &= ~bit(v);
        order.push_back(v);
        colour.push_back(c);
      }
    }
    for (std::size_t idx = order.size(); idx-- > 0;) {
      if (current.size() + colour[idx] <= best_.size()) return;
      const std::size_t v = order[idx];
      current.push_back(v);
      const Mask next = p & adj_[v];
      if (next)
        expand(current, next);
      else if (current.size() > best_.size())
        best_ = current;
      current.pop_back();
      p &= ~bit(v);
    }
  }

  std::vector<Mask> adj_;
  std::vector<std::size_t> best_;
};

CountResult greedy_separated(const DistanceMatrix& d, double eps) {
  CountResult r;
  std::vector<std::uint8_t> blocked(d.size(), 0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (blocked[i]) continue;
    r.witness.push_back(i);
    simd::mark_below(d.row(i), eps, blocked);
    blocked[i] = 1;
  }
  r.value = r.witness.size();
  return r;
}

CountResult greedy_cover(const DistanceMatrix& d, double eps, std::span<const std::size_t> targets,
                         std::span<const std::size_t> candidates) {
  CountResult r;
  std::vector<std::uint8_t> covered(targets.size(), 0);
  std::size_t remaining = targets.size();
  std::vector<std::uint8_t> used(candidates.size(), 0);
  while (remaining > 0) {
    std::size_t best = candidates.size(), best_gain = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      std::size_t gain = 0;
      for (std::size_t t = 0; t < targets.size(); ++t)
        gain += !covered[t] && d(candidates[c], targets[t]) < eps;
      if (gain > best_gain) {
        best_gain = gain;
        best = c;
      }
    }
    if (best == candidates.size())
      throw std::invalid_argument("spanning: some target is at distance >= eps from every candidate");
    used[best] = 1;
    r.witness.push_back(candidates[best]);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (!covered[t] && d(candidates[best], targets[t]) < eps) {
        covered[t] = 1;
        --remaining;
      }
    }
  }
  r.value = r.witness.size();
  return r;
}

class CoverSearch {
 public:
  CoverSearch(std::vector<Mask> sets, std::vector<std::size_t> ids, std::size_t n_targets)
      : sets_(std::move(sets)), ids_(std::move(ids)), n_targets_(n_targets) {}

  std::vector<std::size_t> run(std::vector<std::size_t> upper) {
    best_ = std::move(upper);
    std::vector<std::size_t> chosen;
    const Mask all = n_targets_ == 64 ? ~Mask{0} : bit(n_targets_) - 1;
    rec(all, chosen);
    return best_;
  }

 private:
  void rec(Mask uncovered, std::vector<std::size_t>& chosen) {
    if (uncovered == 0) {
      if (chosen.size() < best_.size()) best_ = chosen;
      return;
    }
    int max_gain = 0;
    for (Mask s : sets_) max_gain = std::max(max_gain, std::popcount(s & uncovered));
    const std::size_t need =
        (static_cast<std::size_t>(std::popcount(uncovered)) + max_gain - 1) / max_gain;
    if (chosen.size() + need >= best_.size()) return;

    // branch on the uncovered target with the fewest covering sets
    std::size_t pick = 0, pick_options = sets_.size() + 1;
    for (Mask u = uncovered; u;) {
      const auto t = static_cast<std::size_t>(std::countr_zero(u));
      u &= u - 1;
      std::size_t options = 0;
      for (Mask s : sets_) options += (s >> t) & 1U;
      if (options < pick_options) {
        pick_options = options;
        pick = t;
      }
    }
    std::vector<std::size_t> branch;
    for (std::size_t c = 0; c < sets_.size(); ++c)
      if ((sets_[c] >> pick) & 1U) branch.push_back(c);
    std::stable_sort(branch.begin(), branch.end(), [&](std::size_t a, std::size_t b) {
      return std::popcount(sets_[a] & uncovered) > std::popcount(sets_[b] & uncovered);
    });
    for (std::size_t c : branch) {
      chosen.push_back(ids_[c]);
      rec(uncovered & ~sets_[c], chosen);
      chosen.pop_back();
    }
  }

  std::vector<Mask> sets_;
  std::vector<std::size_t> ids_;
  std::size_t n_targets_;
  std::vector<std::size_t> best_;
};

}  // namespace

CountResult count_separated(const DistanceMatrix& d, double eps, CountMode mode,
                            std::size_t exact_cap) {
  require_eps(eps);
  if (d.size() == 0) return {0, true, {}};
  if (mode == CountMode::greedy) return greedy_separated(d, eps);

  require_cap(d.size(), exact_cap, "separated count");
  const std::size_t n = d.size();
  std::vector<Mask> adj(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && d(i, j) >= eps) adj[i] |= bit(j);
  CountResult r;
  r.witness = CliqueSearch(std::move(adj)).run();
  std::sort(r.witness.begin(), r.witness.end());
  r.value = r.witness.size();
  r.exact = true;
  return r;
}

CountResult count_spanning(const DistanceMatrix& d, double eps, std::span<const std::size_t> targets,
                           std::span<const std::size_t> candidates, CountMode mode,
                           std::size_t exact_cap) {
  require_eps(eps);
  if (targets.empty()) return {0, true, {}};
  CountResult greedy = greedy_cover(d, eps, targets, candidates);
  if (mode == CountMode::greedy) return greedy;

  require_cap(targets.size(), exact_cap, "spanning count");
  std::vector<Mask> sets;
  std::vector<std::size_t> ids;
  for (std::size_t c : candidates) {
    Mask m = 0;
    for (std::size_t t = 0; t < targets.size(); ++t)
      if (d(c, targets[t]) < eps) m |= bit(t);
    if (m == 0 || std::find(sets.begin(), sets.end(), m) != sets.end()) continue;
    sets.push_back(m);
    ids.push_back(c);
  }
  CountResult r;
  r.witness = CoverSearch(std::move(sets), std::move(ids), targets.size()).run(greedy.witness);
  std::sort(r.witness.begin(), r.witness.end());
  r.value = r.witness.size();
  r.exact = true;
  return r;
}

CountResult count_spanning_intrinsic(const DistanceMatrix& d, double eps, CountMode mode,
                                     std::size_t exact_cap) {
  std::vector<std::size_t> all(d.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return count_spanning(d, eps, all, all, mode, exact_cap);
}

CountResult count_spanning_ambient(const DistanceMatrix& d, std::size_t sample_size, double eps,
                                   CountMode mode, std::size_t exact_cap) {
  if (sample_size > d.size()) throw std::invalid_argument("spanning: sample larger than the point set");
  std::vector<std::size_t> targets(sample_size), all(d.size());
  std::iota(targets.begin(), targets.end(), std::size_t{0});
  std::iota(all.begin(), all.end(), std::size_t{0});
  return count_spanning(d, eps, targets, all, mode, exact_cap);
}

}  // namespace topent::bowen
