#include "topent/fractal.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace topent::fractal {

namespace {

void require_base(std::uint32_t base) {
  if (base < 2) throw std::invalid_argument("digit coding: base must be >= 2");
}

Word word_from_index(Count j, std::uint32_t base, std::size_t n) {
  Word w(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    w[i] = static_cast<Symbol>(static_cast<std::uint32_t>(j % base));
    j /= base;
  }
  return w;
}

// index of the lower-representation cylinder of length n containing x
Count cylinder_index(const Rational& x, const Count& scale) {
  if (x.num() == 0) return 0;
  const Count num = Count(x.num()) * scale;
  const Count den = x.den();
  return (num + den - 1) / den - 1;
}

void check_budget(const Count& words, const Budget& budget) {
  if (words > budget.max_words)
    throw BudgetExceeded("digit prefixes: " + words.str() + " words exceed the budget of " +
                         std::to_string(budget.max_words));
}

void check_unit(const Rational& x) {
  if (x < Rational(0) || x > Rational(1)) throw std::invalid_argument("digit coding: point outside [0,1]");
}

}  // namespace

Word lower_digits(const Rational& x, std::uint32_t base, std::size_t n) {
  require_base(base);
  check_unit(x);
  Word w(n, 0);
  if (x.num() == 0) return w;
  // x in (0,1]: digit = ceil(k x) - 1 and the remainder stays in (0,1]
  __int128 p = x.num(), q = x.den();
  for (std::size_t i = 0; i < n; ++i) {
    const __int128 kp = p * base;
    const __int128 d = (kp + q - 1) / q - 1;
    w[i] = static_cast<Symbol>(d);
    p = kp - d * q;
  }
  return w;
}

Word lower_digits(double x, std::uint32_t base, std::size_t n) {
  require_base(base);
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("digit coding: point outside [0,1]");
  Word w(n, 0);
  if (x == 0.0) return w;
  for (std::size_t i = 0; i < n; ++i) {
    const double kx = x * base;
    double d = std::ceil(kx) - 1.0;
    d = std::clamp(d, 0.0, double(base - 1));
    w[i] = static_cast<Symbol>(d);
    x = kx - d;
    if (x <= 0.0) x = 0.0;  // rounding hit a terminating point; stay on the lower side
  }
  return w;
}

Count word_index(const Word& w, std::uint32_t base) {
  Count j = 0;
  for (Symbol s : w) j = j * base + s;
  return j;
}

FractalSubset FractalSubset::whole_interval() { return {Kind::whole, {}, {}, 1e-9, 1U << 16, "[0,1]"}; }
FractalSubset FractalSubset::rationals() { return {Kind::rationals, {}, {}, 1e-9, 1U << 16, "rationals in [0,1]"}; }
FractalSubset FractalSubset::irrationals() {
  return {Kind::irrationals, {}, {}, 1e-9, 1U << 16, "irrationals in [0,1]"};
}
FractalSubset FractalSubset::cantor() { return {Kind::cantor, {}, {}, 1e-9, 1U << 16, "middle-thirds Cantor set"}; }

FractalSubset FractalSubset::interval_union(std::vector<std::pair<Rational, Rational>> parts) {
  for (const auto& [a, b] : parts) {
    check_unit(a);
    check_unit(b);
    if (b < a) throw std::invalid_argument("interval union: reversed interval");
  }
  return {Kind::intervals, std::move(parts), {}, 1e-9, 1U << 16, "union of closed intervals"};
}

FractalSubset FractalSubset::cantor_level(std::size_t m) {
  if (m > 36) throw std::invalid_argument("cantor level: m too large for exact endpoints");
  std::int64_t scale = 1;
  for (std::size_t i = 0; i < m; ++i) scale *= 3;
  std::vector<std::pair<Rational, Rational>> parts;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
    std::int64_t left = 0;
    for (std::size_t i = 0; i < m; ++i) left = left * 3 + (((code >> (m - 1 - i)) & 1U) ? 2 : 0);
    parts.emplace_back(Rational(left, scale), Rational(left + 1, scale));
  }
  auto s = interval_union(std::move(parts));
  s.description = "Cantor approximation of level " + std::to_string(m);
  return s;
}

FractalSubset FractalSubset::from_predicate(std::function<bool(double)> pred, double delta,
                                            std::string description) {
  if (!(delta > 0.0)) throw std::invalid_argument("predicate subset: delta must be positive");
  return {Kind::predicate, {}, std::move(pred), delta, 1U << 16, std::move(description)};
}

PrefixSet digit_prefixes(const FractalSubset& set, const DigitCoding& coding, std::size_t n,
                         const Budget& budget) {
  const std::uint32_t k = coding.base;
  require_base(k);
  PrefixSet out{Alphabet{k, {}}, n, {}};
  const Count scale = ipow(k, n);

  switch (set.kind) {
    case FractalSubset::Kind::whole:
    case FractalSubset::Kind::rationals:
    case FractalSubset::Kind::irrationals: {
      // every cylinder is a nondegenerate interval
      check_budget(scale, budget);
      const auto total = static_cast<std::uint64_t>(scale);
      out.words.reserve(total);
      for (std::uint64_t j = 0; j < total; ++j) out.words.push_back(word_from_index(j, k, n));
      return out;
    }
    case FractalSubset::Kind::cantor: {
      if (k != 3) throw std::invalid_argument("cantor set: exact coding needs base 3");
      check_budget(ipow(2, n), budget);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << n); ++code) {
        Word w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = ((code >> (n - 1 - i)) & 1U) ? 2 : 0;
        out.words.push_back(std::move(w));
      }
      return out;
    }
    case FractalSubset::Kind::intervals: {
      std::vector<std::pair<Count, Count>> ranges;
      for (const auto& [a, b] : set.intervals)
        ranges.emplace_back(cylinder_index(a, scale), cylinder_index(b, scale));
      std::sort(ranges.begin(), ranges.end());
      std::vector<std::pair<Count, Count>> merged;
      for (auto& r : ranges) {
        if (!merged.empty() && r.first <= merged.back().second + 1)
          merged.back().second = std::max(merged.back().second, r.second);
        else
          merged.push_back(r);
      }
      Count total = 0;
      for (const auto& [lo, hi] : merged) total += hi - lo + 1;
      check_budget(total, budget);
      for (const auto& [lo, hi] : merged)
        for (Count j = lo; j <= hi; ++j) out.words.push_back(word_from_index(j, k, n));
      return out;
    }
    case FractalSubset::Kind::predicate: {
      if (!set.predicate) throw std::invalid_argument("predicate subset without a predicate");
      check_budget(scale, budget);
      const std::size_t s_count = std::max<std::size_t>(set.samples, 2);
      std::vector<double> hits;
      for (std::size_t s = 0; s < s_count; ++s) {
        const double x = double(s) / double(s_count - 1);
        if (set.predicate(x)) hits.push_back(x);
      }
      const double width = 1.0 / static_cast<double>(scale);
      const auto total = static_cast<std::uint64_t>(scale);
      for (std::uint64_t j = 0; j < total; ++j) {
        const double lo = double(j) * width - set.delta, hi = double(j + 1) * width + set.delta;
        auto it = std::lower_bound(hits.begin(), hits.end(), lo);
        if (it != hits.end() && *it <= hi) out.words.push_back(word_from_index(j, k, n));
      }
      return out;
    }
  }
  return out;
}

std::optional<SeqSetExpr> digit_seqset(const FractalSubset& set, const DigitCoding& coding) {
  require_base(coding.base);
  switch (set.kind) {
    case FractalSubset::Kind::whole:
    case FractalSubset::Kind::rationals:
    case FractalSubset::Kind::irrationals:
      return full_shift(coding.base);
    case FractalSubset::Kind::cantor:
      if (coding.base != 3) return std::nullopt;
      return image(SymbolMap{{0, 2}, 3}, full_shift(2));
    case FractalSubset::Kind::intervals:
      if (set.intervals.size() == 1 && set.intervals[0].first == Rational(0) &&
          set.intervals[0].second == Rational(1))
        return full_shift(coding.base);
      return std::nullopt;
    case FractalSubset::Kind::predicate:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

IfsSystem::IfsSystem(std::vector<AffineMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw std::invalid_argument("IFS: at least one map is required");
  dim_ = static_cast<std::size_t>(maps_[0].offset.size());
  if (dim_ == 0) throw std::invalid_argument("IFS: dimension must be positive");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const auto& m = maps_[i];
    const std::string tag = "IFS map " + std::to_string(i) + ": ";
    if (std::size_t(m.matrix.rows()) != dim_ || std::size_t(m.matrix.cols()) != dim_ ||
        std::size_t(m.offset.size()) != dim_)
      throw std::invalid_argument(tag + "dimension mismatch");
    if (!m.matrix.allFinite() || !m.offset.allFinite()) throw std::invalid_argument(tag + "non-finite entry");
    const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(m.matrix).singularValues()(0);
    double r = norm;
    if (m.declared_ratio) {
      if (*m.declared_ratio + 1e-12 < norm) {
        std::ostringstream msg;
        msg << tag << "declared ratio " << *m.declared_ratio << " is below the operator norm " << norm;
        throw std::invalid_argument(msg.str());
      }
      r = *m.declared_ratio;
    }
    if (!(r < 1.0)) {
      std::ostringstream msg;
      msg << tag << "not a contraction (ratio " << r << ")";
      throw std::invalid_argument(msg.str());
    }
    ratios_.push_back(r);
  }
}

IfsSystem IfsSystem::from_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("IFS file: ") + e.what());
  }
  try {
    const std::size_t dim = doc.at("dimension").get<std::size_t>();
    std::vector<AffineMap> maps;
    for (const auto& jm : doc.at("maps")) {
      AffineMap m;
      m.matrix = Eigen::MatrixXd::Zero(Eigen::Index(dim), Eigen::Index(dim));
      m.offset = Eigen::VectorXd::Zero(Eigen::Index(dim));
      const auto& jmat = jm.at("matrix");
      if (jmat.is_number()) {
        if (dim != 1) throw std::invalid_argument("IFS file: scalar matrix needs dimension 1");
        m.matrix(0, 0) = jmat.get<double>();
      } else {
        if (jmat.size() != dim) throw std::invalid_argument("IFS file: matrix must have `dimension` rows");
        for (std::size_t r = 0; r < dim; ++r) {
          if (jmat[r].size() != dim) throw std::invalid_argument("IFS file: matrix row of wrong length");
          for (std::size_t c = 0; c < dim; ++c) m.matrix(Eigen::Index(r), Eigen::Index(c)) = jmat[r][c].get<double>();
        }
      }
      const auto& joff = jm.at("offset");
      if (joff.is_number()) {
        if (dim != 1) throw std::invalid_argument("IFS file: scalar offset needs dimension 1");
        m.offset(0) = joff.get<double>();
      } else {
        if (joff.size() != dim) throw std::invalid_argument("IFS file: offset of wrong length");
        for (std::size_t c = 0; c < dim; ++c) m.offset(Eigen::Index(c)) = joff[c].get<double>();
      }
      if (jm.contains("ratio")) m.declared_ratio = jm.at("ratio").get<double>();
      maps.push_back(std::move(m));
    }
    return IfsSystem(std::move(maps));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("IFS file: ") + e.what());
  }
}

IfsSystem IfsSystem::cantor() {
  AffineMap f0{Eigen::MatrixXd::Constant(1, 1, 1.0 / 3.0), Eigen::VectorXd::Zero(1), std::nullopt};
  AffineMap f1{Eigen::MatrixXd::Constant(1, 1, 1.0 / 3.0), Eigen::VectorXd::Constant(1, 2.0 / 3.0), std::nullopt};
  return IfsSystem({f0, f1});
}

double IfsSystem::max_ratio() const { return *std::max_element(ratios_.begin(), ratios_.end()); }

Eigen::VectorXd IfsSystem::fixed_point(std::size_t i) const {
  const auto& m = maps_.at(i);
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(Eigen::Index(dim_), Eigen::Index(dim_)) - m.matrix;
  return lhs.fullPivLu().solve(m.offset);
}

double IfsSystem::invariant_radius(const Eigen::VectorXd& seed) const {
  if (std::size_t(seed.size()) != dim_) throw std::invalid_argument("IFS: seed of wrong dimension");
  double step = 0.0;
  for (const auto& m : maps_) step = std::max(step, (m(seed) - seed).norm());
  return step / (1.0 - max_ratio());
}

CodedPoint ifs_pi(const IfsSystem& sys, const Word& word, const Eigen::VectorXd& seed) {
  const double rho = sys.invariant_radius(seed);
  Eigen::VectorXd x = seed;
  double r = 1.0;
  for (std::size_t i = word.size(); i-- > 0;) {
    if (word[i] >= sys.size()) throw std::invalid_argument("IFS: symbol without a map");
    x = sys.map(word[i])(x);
    r *= sys.ratio(word[i]);
  }
  return {std::move(x), r * rho};
}

CodedPoint ifs_pi(const IfsSystem& sys, const PeriodicSequence& seq, const Eigen::VectorXd& seed,
                  std::size_t depth) {
  if (seq.period.empty()) throw std::invalid_argument("IFS: sequence with an empty period");
  Word w(depth);
  for (std::size_t i = 0; i < depth; ++i) w[i] = seq.at(i);
  return ifs_pi(sys, w, seed);
}

AmbientSubset AmbientSubset::attractor() { return {Kind::attractor, {}, 1e-12, "attractor"}; }

AmbientSubset AmbientSubset::finite(std::vector<Eigen::VectorXd> points, double delta) {
  if (!(delta >= 0.0)) throw std::invalid_argument("ambient subset: negative delta");
  return {Kind::points, std::move(points), delta, "finite point set"};
}

namespace {

struct Composed {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  double ratio;
};

// Visits f_w for every word of length n in lexicographic order.
template <class Visit>
void enumerate_words(const IfsSystem& sys, std::size_t n, const Budget& budget, Visit&& visit) {
  check_budget(ipow(sys.size(), n), budget);
  const auto d = Eigen::Index(sys.dim());
  std::vector<Composed> stack;
  stack.push_back({Eigen::MatrixXd::Identity(d, d), Eigen::VectorXd::Zero(d), 1.0});
  Word w;
  auto rec = [&](auto&& self) -> void {
    if (w.size() == n) {
      visit(w, stack.back());
      return;
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
      const Composed& top = stack.back();
      const auto& m = sys.map(i);
      stack.push_back({top.a * m.matrix, top.a * m.offset + top.b, top.ratio * sys.ratio(i)});
      w.push_back(static_cast<Symbol>(i));
      self(self);
      w.pop_back();
      stack.pop_back();
    }
  };
  rec(rec);
}

}  // namespace

AmbientSubset AmbientSubset::sampled(const IfsSystem& sys,
                                     const std::function<bool(const Eigen::VectorXd&)>& pred,
                                     std::size_t depth, double delta) {
  const Eigen::VectorXd seed = sys.fixed_point(0);
  std::vector<Eigen::VectorXd> pts;
  enumerate_words(sys, depth, Budget{}, [&](const Word&, const Composed& f) {
    Eigen::VectorXd x = f.a * seed + f.b;
    if (pred(x)) pts.push_back(std::move(x));
  });
  auto s = finite(std::move(pts), delta);
  s.description = "sampled predicate at depth " + std::to_string(depth);
  return s;
}

PrefixSet ifs_preimage_prefixes(const IfsSystem& sys, const AmbientSubset& set, std::size_t n,
                                const Budget& budget) {
  PrefixSet out{Alphabet{static_cast<std::uint32_t>(sys.size()), {}}, n, {}};
  const Eigen::VectorXd seed = sys.fixed_point(0);
  const double rho = sys.invariant_radius(seed);
  for (const auto& p : set.points)
    if (std::size_t(p.size()) != sys.dim()) throw std::invalid_argument("ambient subset: point of wrong dimension");
  enumerate_words(sys, n, budget, [&](const Word& w, const Composed& f) {
    bool keep = set.kind == AmbientSubset::Kind::attractor;
    if (!keep) {
      const Eigen::VectorXd c = f.a * seed + f.b;
      const double reach = f.ratio * rho + set.delta;
      for (const auto& p : set.points) {
        if ((p - c).norm() <= reach) {
          keep = true;
          break;
        }
      }
    }
    if (keep) out.words.push_back(w);
  });
  return out;
}

}  // namespace topent::fractal
