#include "topent/checks.hpp"

#include "topent/dsl.hpp"
#include "topent/dynamics.hpp"
#include "topent/entropy.hpp"
#include "topent/fractal.hpp"
#include "topent/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace topent::checks {

using bowen::CountMode;
using bowen::DistanceMatrix;

namespace {

constexpr std::size_t kMaxRecorded = 25;

class Recorder {
 public:
  explicit Recorder(SuiteReport& r) : r_(r) {}

  // Records a check; returns `ok`.
  bool expect(bool ok, const std::string& property, const std::function<std::string()>& detail) {
    ++r_.checks;
    if (!ok) {
      ++failures_[property];
      if (r_.violations.size() < kMaxRecorded) r_.violations.push_back({property, detail()});
    }
    return ok;
  }

  void finish() {
    for (const auto& [property, n] : failures_)
      r_.notes.push_back(property + ": " + std::to_string(n) + " violation(s)");
  }

 private:
  SuiteReport& r_;
  std::map<std::string, std::size_t> failures_;
};

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(std::mt19937_64& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string describe(const DistanceMatrix& d) {
  std::ostringstream out;
  out << d.size() << " points, distances [";
  for (std::size_t i = 0; i < d.size(); ++i) {
    out << (i ? "; " : "");
    for (std::size_t j = 0; j < d.size(); ++j) out << (j ? " " : "") << fmt(d(i, j));
  }
  out << ']';
  return out.str();
}

// ---------------------------------------------------------------------------
// Expressions.

SymbolSet random_subset(std::mt19937_64& rng, std::uint32_t k) {
  SymbolSet s;
  for (Symbol x = 0; x < k; ++x)
    if (coin(rng)) s.push_back(x);
  if (s.empty()) s.push_back(static_cast<Symbol>(pick(rng, 0, k - 1)));
  return s;
}

Word random_word(std::mt19937_64& rng, std::uint32_t k, std::size_t len) {
  Word w(len);
  for (auto& x : w) x = static_cast<Symbol>(pick(rng, 0, k - 1));
  return w;
}

SeqSetExpr random_leaf(std::mt19937_64& rng, std::uint32_t k) {
  switch (pick(rng, 0, 7)) {
    case 0: return full_shift(k);
    case 1: return ev_const(k, static_cast<Symbol>(pick(rng, 0, k - 1)));
    case 2: {
      const auto den = static_cast<std::int64_t>(pick(rng, 1, 6));
      const auto num = static_cast<std::int64_t>(pick(rng, 1, std::size_t(den)));
      return sr_set(k, Rational(num, den), static_cast<Symbol>(pick(rng, 0, k - 1)));
    }
    case 3: {
      SubsetSequence seq;
      for (std::size_t i = pick(rng, 0, 3); i > 0; --i) seq.prefix.push_back(random_subset(rng, k));
      for (std::size_t i = pick(rng, 1, 3); i > 0; --i) seq.period.push_back(random_subset(rng, k));
      return cyl_sched(k, std::move(seq));
    }
    case 4: {
      const auto den = static_cast<std::int64_t>(pick(rng, 1, 5));
      const auto num = static_cast<std::int64_t>(pick(rng, 1, std::size_t(den)));
      BlockSchedule s = build_schedule(Rational(num, den), pick(rng, 1, 3));
      return cyl_sched(k, BlockPlan{std::move(s), static_cast<Symbol>(pick(rng, 0, k - 1))});
    }
    case 5: {
      FiniteMap m;
      for (std::uint32_t i = 0; i < k; ++i) m.table.push_back(static_cast<Symbol>(pick(rng, 0, k - 1)));
      return orbit(std::move(m));
    }
    case 6: {
      TransitionRelation rel;
      for (std::uint32_t i = 0; i < k; ++i) rel.successors.push_back(random_subset(rng, k));
      return orbit_sv(std::move(rel));
    }
    default: {
      std::vector<PeriodicSequence> seqs;
      for (std::size_t i = pick(rng, 1, 3); i > 0; --i)
        seqs.push_back({random_word(rng, k, pick(rng, 0, 3)), random_word(rng, k, pick(rng, 1, 3))});
      return finite_set(k, std::move(seqs));
    }
  }
}

}  // namespace

SeqSetExpr random_expr(std::mt19937_64& rng, std::uint32_t k, std::size_t max_depth) {
  if (k < 1 || k > 4) throw std::invalid_argument("random_expr: alphabet size must be in 1..4");
  if (max_depth <= 1 || coin(rng, 0.3)) return random_leaf(rng, k);
  const std::size_t d = max_depth - 1;
  for (;;) {
    switch (pick(rng, 0, 10)) {
      case 0: return shift(pick(rng, 1, 3), random_expr(rng, k, d));
      case 1: return dilate(pick(rng, 2, 3), random_expr(rng, k, d));
      case 2: return restriction(pick(rng, 1, 3), random_expr(rng, k, d));
      case 3:
        if (k == 4) return block(2, random_expr(rng, 2, d));
        if (k == 1) return block(pick(rng, 2, 3), random_expr(rng, 1, d));
        break;
      case 4: return unite(random_expr(rng, k, d), random_expr(rng, k, d));
      case 5:
        if (k >= 2) {
          const auto a = static_cast<std::uint32_t>(pick(rng, 1, k - 1));
          return disjoint_union(random_expr(rng, a, d), random_expr(rng, k - a, d));
        }
        break;
      case 6:
        if (k == 4) return product(random_expr(rng, 2, d), random_expr(rng, 2, d));
        if (coin(rng)) return product(random_expr(rng, 1, d), random_expr(rng, k, d));
        return product(random_expr(rng, k, d), random_expr(rng, 1, d));
      case 7: {
        const auto j = static_cast<std::uint32_t>(pick(rng, 1, 4));
        SymbolMap m{{}, k};
        for (std::uint32_t i = 0; i < j; ++i) m.table.push_back(static_cast<Symbol>(pick(rng, 0, k - 1)));
        return image(std::move(m), random_expr(rng, j, d));
      }
      case 8: return closure(random_expr(rng, k, d));
      default: return random_leaf(rng, k);
    }
  }
}

namespace {

// ---------------------------------------------------------------------------
// Clouds.

DistanceMatrix embed(std::mt19937_64& rng, std::size_t count, std::string& desc) {
  const std::size_t dim = pick(rng, 1, 3);
  const bool lattice = coin(rng);
  std::vector<double> x(count * dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& v : x) v = lattice ? double(pick(rng, 0, 4)) : unit(rng);
  const std::size_t kind = pick(rng, 0, 3);
  static const char* names[] = {"l2", "l1", "linf", "projected l1"};
  desc += std::to_string(dim) + "-d " + (lattice ? "lattice" : "uniform") + " " + names[kind];
  DistanceMatrix d(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) {
        const double diff = std::fabs(x[i * dim + c] - x[j * dim + c]);
        switch (kind) {
          case 0: s += diff * diff; break;
          case 1: s += diff; break;
          case 2: s = std::max(s, diff); break;
          default:
            if (c == 0) s += diff;  // drops the other coordinates: a semimetric
        }
      }
      d.at(i, j) = kind == 0 ? std::sqrt(s) : s;
    }
  }
  return d;
}

}  // namespace

RandomCloud random_cloud(std::mt19937_64& rng, std::size_t max_points, std::size_t max_extra) {
  RandomCloud rc;
  rc.k_size = pick(rng, 1, std::max<std::size_t>(1, max_points));
  const std::size_t total = rc.k_size + pick(rng, 0, max_extra);
  rc.description = "K' of " + std::to_string(rc.k_size) + " and X of " + std::to_string(total) + " points, ";
  rc.d = embed(rng, total, rc.description);
  rc.description += "; upper semimetric max with ";
  const DistanceMatrix other = embed(rng, total, rc.description);
  rc.d_upper = rc.d;
  for (std::size_t i = 0; i < rc.d_upper.data().size(); ++i)
    rc.d_upper.data()[i] = std::max(rc.d.data()[i], other.data()[i]);
  for (std::size_t i = 0; i < rc.k_size; ++i)
    if (coin(rng, 0.6)) rc.sub.push_back(i);
  if (rc.sub.empty()) rc.sub.push_back(pick(rng, 0, rc.k_size - 1));
  return rc;
}

std::vector<double> critical_eps(const DistanceMatrix& d) {
  std::vector<double> v;
  for (double x : d.data())
    if (x > 0.0) v.push_back(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<double> out = v;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out.push_back(0.5 * (v[i] + v[i + 1]));
  out.push_back(v.empty() ? 1.0 : 1.5 * v.back());
  if (!v.empty()) out.push_back(0.5 * v.front());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<std::size_t> iota_n(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

// ---------------------------------------------------------------------------

SuiteReport lemma_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "lemma-4.1";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed);
  const std::size_t target = cfg.instances ? cfg.instances : 200;

  for (std::size_t inst = 0; inst < target; ++inst) {
    const RandomCloud rc = random_cloud(rng);
    ++rep.instances;
    const auto kp = iota_n(rc.k_size);
    const auto all = iota_n(rc.d.size());
    const DistanceMatrix dk = rc.d.restricted(kp);
    const DistanceMatrix dk_up = rc.d_upper.restricted(kp);
    const DistanceMatrix dsub = rc.d.restricted(rc.sub);

    rec.expect(bowen::check_semimetric(rc.d).empty() && bowen::check_semimetric(rc.d_upper).empty(),
               "random semimetrics are semimetrics", [&] { return rc.description; });

    std::vector<double> eps = critical_eps(dk);
    for (double e : std::vector<double>(eps)) eps.push_back(0.5 * e);
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());
    if (eps.size() > 14) {
      std::shuffle(eps.begin(), eps.end(), rng);
      eps.resize(14);
      std::sort(eps.begin(), eps.end());
    }

    struct Counts {
      std::size_t s, id, d;
    };
    auto counts = [&](double e) {
      return Counts{bowen::count_separated(dk, e).value, bowen::count_spanning_intrinsic(dk, e).value,
                    bowen::count_spanning(rc.d, e, kp, all).value};
    };
    auto where = [&](double e) { return rc.description + ", eps=" + fmt(e) + ", K': " + describe(dk); };

    std::vector<Counts> per_eps;
    for (double e : eps) per_eps.push_back(counts(e));

    for (std::size_t a = 0; a < eps.size(); ++a) {
      const double e = eps[a];
      const Counts c = per_eps[a];
      const Counts c2 = counts(2 * e);

      // eps < eps' gives N(eps') <= N(eps)
      for (std::size_t b = a + 1; b < eps.size(); ++b) {
        const Counts cb = per_eps[b];
        rec.expect(cb.s <= c.s && cb.id <= c.id && cb.d <= c.d, "counts nonincreasing in eps", [&] {
          return where(e) + ", eps'=" + fmt(eps[b]) + ": s " + std::to_string(c.s) + "->" + std::to_string(cb.s) +
                 ", id " + std::to_string(c.id) + "->" + std::to_string(cb.id) + ", d " + std::to_string(c.d) +
                 "->" + std::to_string(cb.d);
        });
      }

      // sandwiches
      rec.expect(c2.id <= c.d && c.d <= c.id, "sandwich N^id(2eps) <= N^d(eps) <= N^id(eps)", [&] {
        return where(e) + ": N^id(2eps)=" + std::to_string(c2.id) + " N^d=" + std::to_string(c.d) +
               " N^id=" + std::to_string(c.id);
      });
      rec.expect(c2.s <= c.id && c.id <= c.s, "sandwich N^s(2eps) <= N^id(eps) <= N^s(eps)", [&] {
        return where(e) + ": N^s(2eps)=" + std::to_string(c2.s) + " N^id=" + std::to_string(c.id) +
               " N^s=" + std::to_string(c.s);
      });

      // K in K', gamma <= gamma'
      const std::size_t s_small = bowen::count_separated(dsub, e).value;
      const std::size_t id_small = bowen::count_spanning_intrinsic(dsub, e).value;
      const std::size_t d_small = bowen::count_spanning(rc.d, e, rc.sub, all).value;
      const std::size_t s_big = bowen::count_separated(dk_up, e).value;
      const std::size_t id_big = bowen::count_spanning_intrinsic(dk_up, e).value;
      const std::size_t d_big = bowen::count_spanning(rc.d_upper, e, kp, all).value;
      auto v_detail = [&](std::size_t small, std::size_t big) {
        std::ostringstream o;
        o << where(e) << ", K = {";
        for (std::size_t i = 0; i < rc.sub.size(); ++i) o << (i ? "," : "") << rc.sub[i];
        o << "}: N(K,gamma)=" << small << " N(K',gamma')=" << big;
        return o.str();
      };
      rec.expect(s_small <= s_big, "N^s monotone in K and gamma", [&] { return v_detail(s_small, s_big); });
      rec.expect(d_small <= d_big, "N^d monotone in K and gamma", [&] { return v_detail(d_small, d_big); });
      rec.expect(id_small <= id_big, "N^id monotone in K and gamma",
                 [&] { return v_detail(id_small, id_big); });
      // the same with K = K', and the chain through N^d that survives enlarging K
      rec.expect(c.id <= id_big, "N^id monotone in gamma", [&] { return v_detail(c.id, id_big); });
      const std::size_t id_small2 = bowen::count_spanning_intrinsic(dsub, 2 * e).value;
      rec.expect(id_small2 <= id_big, "N^id(K, gamma, 2eps) <= N^id(K', gamma', eps)",
                 [&] { return v_detail(id_small2, id_big); });

      // scaling: N(c gamma, c eps) = N(gamma, eps)
      static const double scales[] = {0.25, 0.5, 2.0, 3.0, 10.0};
      const double sc = scales[pick(rng, 0, 4)];
      const DistanceMatrix dks = bowen::scaled(dk, sc);
      const std::size_t id_scaled = bowen::count_spanning_intrinsic(dks, sc * e).value;
      const std::size_t s_scaled = bowen::count_separated(dks, sc * e).value;
      rec.expect(id_scaled == c.id && s_scaled == c.s, "scaling N(c gamma, c eps) = N(gamma, eps)", [&] {
        return where(e) + ", c=" + fmt(sc) + ": N^id " + std::to_string(c.id) + " vs " + std::to_string(id_scaled) +
               ", N^s " + std::to_string(c.s) + " vs " + std::to_string(s_scaled);
      });

      // greedy sandwich
      const std::size_t g = bowen::count_separated(dk, e, CountMode::greedy).value;
      rec.expect(c2.s <= g && g <= c.s, "greedy N^s(2eps) <= G(eps) <= N^s(eps)", [&] {
        return where(e) + ": N^s(2eps)=" + std::to_string(c2.s) + " G=" + std::to_string(g) +
               " N^s=" + std::to_string(c.s);
      });
      const std::size_t gs = bowen::count_spanning_intrinsic(dk, e, CountMode::greedy).value;
      rec.expect(gs >= c.id, "greedy spanning is an upper bound", [&] {
        return where(e) + ": greedy " + std::to_string(gs) + " exact " + std::to_string(c.id);
      });

      // closed-cover subadditivity: K' covered by two random pieces
      std::vector<std::size_t> p1, p2;
      for (std::size_t i : kp) {
        const std::size_t r = pick(rng, 0, 2);
        if (r != 1) p1.push_back(i);
        if (r != 0) p2.push_back(i);
      }
      const std::size_t n1 = p1.empty() ? 0 : bowen::count_separated(rc.d.restricted(p1), e).value;
      const std::size_t n2 = p2.empty() ? 0 : bowen::count_separated(rc.d.restricted(p2), e).value;
      rec.expect(c.s <= n1 + n2, "subadditivity over a cover", [&] {
        return where(e) + ": N^s(K')=" + std::to_string(c.s) + " pieces " + std::to_string(n1) + "+" +
               std::to_string(n2);
      });
    }
  }
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

std::size_t materialized(const SeqSetExpr& e, std::size_t n, const Budget& b) { return prefixes(e, n, b).size(); }

SuiteReport counting_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "counting";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const std::size_t target = cfg.instances ? cfg.instances : 500;
  const Budget& budget = cfg.budget;

  for (std::size_t attempt = 0; rep.instances < target && attempt < 20 * target; ++attempt) {
    const auto k = static_cast<std::uint32_t>(pick(rng, 1, 4));
    const SeqSetExpr s = random_expr(rng, k, pick(rng, 1, 3));
    const auto kt = static_cast<std::uint32_t>(pick(rng, 1, 4));
    const SeqSetExpr t = random_expr(rng, kt, pick(rng, 1, 2));
    const SeqSetExpr s2 = random_expr(rng, k, pick(rng, 1, 2));
    const auto kd = pick(rng, 2, 3), ks = pick(rng, 1, 3), kr = pick(rng, 1, 3);
    const auto kimg = static_cast<std::uint32_t>(pick(rng, 1, 4));
    SymbolMap phi{{}, kimg};
    for (std::uint32_t i = 0; i < k; ++i) phi.table.push_back(static_cast<Symbol>(pick(rng, 0, kimg - 1)));

    const SeqSetExpr prod_e = product(s, t), dj = disjoint_union(s, t), dil = dilate(kd, s), sh = shift(ks, s),
                     res = restriction(kr, s), img = image(phi, s), blk = block(2, s), un = unite(s, s2),
                     cl = closure(s);
    const std::string text = dsl::print(s);
    bool checked_any = false;

    auto attempt_check = [&](auto&& fn) {
      try {
        fn();
        checked_any = true;
      } catch (const BudgetExceeded&) {
        ++rep.skipped;
      }
    };

    for (std::size_t n = 0; n <= 12; ++n) {
      std::size_t cs = 0;
      try {
        cs = materialized(s, n, budget);
      } catch (const BudgetExceeded&) {
        ++rep.skipped;
        continue;
      }
      const std::string at = text + " at n=" + std::to_string(n);
      attempt_check([&] {
        const Count c = count_prefixes(s, n, budget);
        rec.expect(c == cs, "|prefixes| = count_prefixes", [&] { return at + ": " + std::to_string(cs) + " vs " + c.str(); });
        rec.expect(Count(cs) <= ipow(k, n), "count <= k^n", [&] { return at; });
        rec.expect(cs >= 1, "count >= 1", [&] { return at; });
      });
      attempt_check([&] {
        rec.expect(materialized(cl, n, budget) == cs, "closure keeps prefixes", [&] { return at; });
      });
      attempt_check([&] {
        const std::size_t ct = materialized(t, n, budget);
        const std::size_t cp = materialized(prod_e, n, budget);
        rec.expect(cp == cs * ct, "product counts multiply", [&] {
          return at + " with " + dsl::print(t) + ": " + std::to_string(cp) + " vs " + std::to_string(cs) + "*" +
                 std::to_string(ct);
        });
        const std::size_t cd = materialized(dj, n, budget);
        const std::size_t want = n == 0 ? 1 : cs + ct;
        rec.expect(cd == want, "disjoint-union counts add", [&] {
          return at + " with " + dsl::print(t) + ": " + std::to_string(cd) + " vs " + std::to_string(want);
        });
      });
      if (n >= 1) {
        attempt_check([&] {
          for (std::size_t i = 0; i < kd; ++i) {
            const std::size_t m = n * kd - i;
            const std::size_t c = materialized(dil, m, budget);
            rec.expect(c == cs, "dilation count(D^k S, nk-i) = count(S, n)", [&] {
              return at + ", k=" + std::to_string(kd) + ", i=" + std::to_string(i) + ": " + std::to_string(c);
            });
          }
        });
      }
      attempt_check([&] {
        const std::size_t csh = materialized(sh, n, budget);
        const std::size_t cnk = materialized(s, n + ks, budget);
        const Count upper = ipow(k, ks) * csh;
        rec.expect(csh <= cnk && Count(cnk) <= upper, "shift sandwich", [&] {
          return at + ", k=" + std::to_string(ks) + ": shift " + std::to_string(csh) + ", S(n+k) " + std::to_string(cnk);
        });
      });
      attempt_check([&] {
        const std::size_t cr = materialized(res, n, budget);
        const Count ckn = count_prefixes(s, kr * n, budget);
        rec.expect(Count(cr) <= ckn, "restriction bound", [&] {
          return at + ", k=" + std::to_string(kr) + ": " + std::to_string(cr) + " vs " + ckn.str();
        });
      });
      attempt_check([&] {
        const std::size_t ci = materialized(img, n, budget);
        rec.expect(ci <= cs, "image contraction", [&] { return at + ": " + std::to_string(ci); });
      });
      if (2 * n <= 12) {
        attempt_check([&] {
          const std::size_t cb = materialized(blk, n, budget);
          const std::size_t c2n = materialized(s, 2 * n, budget);
          rec.expect(cb == c2n, "blocking count(B^k S, m) = count(S, mk)", [&] {
            return at + ": " + std::to_string(cb) + " vs " + std::to_string(c2n);
          });
        });
      }
      attempt_check([&] {
        const std::size_t cu = materialized(un, n, budget);
        const std::size_t c2 = materialized(s2, n, budget);
        rec.expect(std::max(cs, c2) <= cu && cu <= cs + c2, "union between max and sum", [&] {
          return at + " with " + dsl::print(s2) + ": " + std::to_string(cu);
        });
      });
    }
    if (checked_any)
      ++rep.instances;
  }
  if (rep.instances < target)
    rep.violations.push_back({"instance count", "only " + std::to_string(rep.instances) + " instances fit the budget"});
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport schedule_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "schedule";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed + 3);
  std::vector<Rational> rs;
  for (std::int64_t b = 1; b <= 12; ++b)
    for (std::int64_t a = 1; a <= b; ++a) rs.emplace_back(a, b);
  const std::size_t randoms = cfg.instances ? cfg.instances : 100;
  for (std::size_t i = 0; i < randoms; ++i) {
    const auto b = static_cast<std::int64_t>(pick(rng, 1, 1000));
    rs.emplace_back(static_cast<std::int64_t>(pick(rng, 1, std::size_t(b))), b);
  }
  for (const Rational& r : rs) {
    ++rep.instances;
    const std::size_t count = pick(rng, 1, 20);
    const BlockSchedule s = build_schedule(r, count);
    const auto issues = check_schedule(s);
    rec.expect(issues.empty(), "schedule conditions", [&] { return r.str() + ": " + issues.front(); });
    rec.expect(s.pairs.size() == count, "pair count", [&] { return r.str(); });
    const auto k = static_cast<std::uint32_t>(pick(rng, 2, 4));
    const SeqSetExpr e = schedule_to_seqset(s, k, 0);
    for (const auto& p : s.pairs) {
      if (p.q > 4096) break;
      const Count c = count_prefixes(e, p.q);
      rec.expect(c == ipow(k, p.p), "count at q_j is k^{p_j}", [&] {
        return r.str() + " pair (" + std::to_string(p.p) + "," + std::to_string(p.q) + "): " + c.str();
      });
    }
    const auto ex = entropy_exact(e);
    const double want = r.to_double() * std::log(double(k));
    rec.expect(ex && std::fabs(ex->value - want) <= 1e-9, "schedule set entropy r log k", [&] {
      return r.str() + ", k=" + std::to_string(k) + ": " + (ex ? fmt(ex->value) : std::string("no closed form"));
    });
    const auto ex2 = entropy_exact(sr_set(k, r));
    rec.expect(ex2 && std::fabs(ex2->value - want) <= 1e-9, "sr entropy r log k", [&] { return r.str(); });
  }
  const double irr[] = {std::sqrt(2.0) / 2.0, (std::sqrt(5.0) - 1.0) / 2.0, std::acos(-1.0) / 4.0,
                        std::exp(1.0) / 3.0, 1.0 / std::sqrt(3.0)};
  for (double r : irr) {
    ++rep.instances;
    const BlockSchedule s = build_schedule(r, 40);
    const auto issues = check_schedule(s);
    rec.expect(issues.empty(), "irrational schedule conditions", [&] { return fmt(r) + ": " + issues.front(); });
    rec.expect(s.pairs.front().p * 1.0 / s.pairs.front().q < r, "irrational ratios stay below r",
               [&] { return fmt(r); });
  }
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport roundtrip_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "roundtrip";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed + 4);
  const std::size_t target = cfg.instances ? cfg.instances : 500;
  for (std::size_t i = 0; i < target; ++i) {
    ++rep.instances;
    const SeqSetExpr e = random_expr(rng, static_cast<std::uint32_t>(pick(rng, 1, 4)), pick(rng, 1, 4));
    const std::string text = dsl::print(e);
    const auto prog = dsl::parse(text);
    rec.expect(prog.ok() && *prog.expr == e, "parse(print(e)) = e", [&] {
      return text + (prog.diagnostics.empty() ? std::string(" (different tree)") : ": " + prog.diagnostics[0].str());
    });
    if (prog.ok()) rec.expect(dsl::print(*prog.expr) == text, "print is stable", [&] { return text; });
  }
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

std::size_t brute_force_walks(const TransitionRelation& rel, std::size_t n) {
  // every word over the alphabet, filtered by the relation
  const std::size_t k = rel.size();
  if (n == 0) return 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= k;
  std::size_t ok = 0;
  Word w(n, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      w[i] = static_cast<Symbol>(c % k);
      c /= k;
    }
    bool good = true;
    for (std::size_t i = 0; i + 1 < n && good; ++i) {
      const auto& succ = rel.successors[w[i]];
      good = std::binary_search(succ.begin(), succ.end(), w[i + 1]);
    }
    ok += good;
  }
  return ok;
}

SuiteReport sft_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "sft";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed + 5);
  const std::size_t target = cfg.instances ? cfg.instances : 60;
  for (std::size_t i = 0; i < target; ++i) {
    ++rep.instances;
    const auto k = static_cast<std::uint32_t>(pick(rng, 1, 5));
    TransitionRelation rel;
    for (std::uint32_t x = 0; x < k; ++x) rel.successors.push_back(random_subset(rng, k));
    const SeqSetExpr e = sft_seqset(rel);
    const std::size_t n_max = k >= 5 ? 8 : (k == 4 ? 10 : 12);
    for (std::size_t n = 0; n <= n_max; ++n) {
      const Count c = count_prefixes(e, n);
      const std::size_t m = prefixes(e, n, Budget{std::uint64_t{1} << 26}).size();
      const std::size_t b = brute_force_walks(rel, n);
      rec.expect(c == m && m == b, "walk count = enumeration", [&] {
        return dsl::print(e) + " at n=" + std::to_string(n) + ": matrix " + c.str() + ", enumerated " +
               std::to_string(m) + ", brute force " + std::to_string(b);
      });
    }
  }
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport fractal_suite(const SuiteConfig&) {
  SuiteReport rep;
  rep.suite = "fractal";
  Recorder rec(rep);
  const auto sys = fractal::IfsSystem::cantor();
  const fractal::DigitCoding base3{3};
  for (std::size_t n = 0; n <= 10; ++n) {
    ++rep.instances;
    const auto digits = fractal::digit_prefixes(fractal::FractalSubset::cantor(), base3, n);
    const auto coded = fractal::ifs_preimage_prefixes(sys, fractal::AmbientSubset::attractor(), n);
    rec.expect(digits.size() == (std::size_t{1} << n), "Cantor digit count 2^n",
               [&] { return "n=" + std::to_string(n) + ": " + std::to_string(digits.size()); });
    rec.expect(coded.size() == digits.size(), "IFS preimage count = digit count",
               [&] { return "n=" + std::to_string(n) + ": " + std::to_string(coded.size()); });
    // shrinking delta never adds words
    auto near_third = [](double x) { return std::fabs(x - 1.0 / 3.0) < 0.05; };
    std::size_t prev = SIZE_MAX;
    for (double delta : {1e-1, 1e-2, 1e-3, 1e-4}) {
      const auto s = fractal::digit_prefixes(fractal::FractalSubset::from_predicate(near_third, delta),
                                             fractal::DigitCoding{2}, n);
      rec.expect(s.size() <= prev, "outer approximation monotone in delta",
                 [&] { return "n=" + std::to_string(n) + ", delta=" + fmt(delta); });
      prev = s.size();
    }
    // coding respects inclusion of intervals
    const auto inner = fractal::digit_prefixes(
        fractal::FractalSubset::interval_union({{Rational(1, 5), Rational(2, 5)}}), fractal::DigitCoding{2}, n);
    const auto outer = fractal::digit_prefixes(
        fractal::FractalSubset::interval_union({{Rational(1, 7), Rational(1, 2)}}), fractal::DigitCoding{2}, n);
    bool subset = std::all_of(inner.words.begin(), inner.words.end(), [&](const Word& w) { return outer.contains(w); });
    rec.expect(subset, "[a,b] in [a',b'] gives a prefix subset", [&] { return "n=" + std::to_string(n); });
  }
  const auto cantor_expr = fractal::digit_seqset(fractal::FractalSubset::cantor(), base3);
  const auto ex = cantor_expr ? entropy_exact(*cantor_expr) : std::nullopt;
  rec.expect(ex && std::fabs(ex->value - std::log(2.0)) < 1e-12, "Cantor entropy log 2", [] { return "exact mode"; });
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport product_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "product";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed + 7);
  const std::size_t target = cfg.instances ? cfg.instances : 60;
  std::size_t strict = 0;
  std::string first_strict;
  auto run = [&](const DistanceMatrix& a, const DistanceMatrix& b, double e, const std::string& label) {
    const DistanceMatrix ab = bowen::product_matrix(a, b);
    const std::size_t na = bowen::count_separated(a, e).value, nb = bowen::count_separated(b, e).value;
    const std::size_t nab = bowen::count_separated(ab, e).value;
    const std::size_t nab2 = bowen::count_separated(ab, 2 * e).value;
    rec.expect(na * nb <= nab, "N^s(K) N^s(L) <= N^s(K x L)", [&] {
      return label + ", eps=" + fmt(e) + ": " + std::to_string(na) + "*" + std::to_string(nb) + " vs " + std::to_string(nab);
    });
    rec.expect(nab2 <= na * nb, "N^s(K x L, 2 eps) <= N^s(K) N^s(L)", [&] {
      return label + ", eps=" + fmt(e) + ": " + std::to_string(nab2) + " vs " + std::to_string(na * nb);
    });
    if (na * nb != nab && ++strict == 1)
      first_strict = label + ", eps=" + fmt(e) + ": " + std::to_string(na) + "*" + std::to_string(nb) +
                     " < " + std::to_string(nab);
  };

  for (std::size_t i = 0; i < target; ++i) {
    ++rep.instances;
    const RandomCloud x = random_cloud(rng, 8, 0), y = random_cloud(rng, 8, 0);
    DistanceMatrix a = x.d.restricted(iota_n(x.k_size)), b = y.d.restricted(iota_n(y.k_size));
    std::vector<double> eps = critical_eps(a);
    std::shuffle(eps.begin(), eps.end(), rng);
    eps.resize(std::min<std::size_t>(eps.size(), 4));
    for (double e : eps) run(a, b, e, "random " + x.description + " x " + y.description);
  }

  // Five points on a circle of circumference 5 with the arc metric.
  DistanceMatrix c5(5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const std::size_t diff = i > j ? i - j : j - i;
      c5.at(i, j) = double(std::min(diff, 5 - diff));
    }
  ++rep.instances;
  run(c5, c5, 1.5, "5-cycle x 5-cycle");
  rep.notes.push_back("product equality failed on " + std::to_string(strict) + " instance(s)" +
                      (strict ? "; first: " + first_strict : std::string()));
  rec.finish();
  return rep;
}

// ---------------------------------------------------------------------------

SuiteReport dnp_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = "dnp";
  Recorder rec(rep);
  std::mt19937_64 rng(cfg.seed + 8);
  const std::size_t target = cfg.instances ? cfg.instances : 60;
  const double ps[] = {1.0, 1.5, 2.0, 3.0, bowen::kInfinity};
  for (std::size_t inst = 0; inst < target; ++inst) {
    ++rep.instances;
    const std::size_t count = pick(rng, 1, 10), horizon = pick(rng, 1, 6);
    const bool symbolic = coin(rng);
    const std::size_t dim = symbolic ? 1 : pick(rng, 1, 2);
    auto cloud = std::make_shared<bowen::SeqCloud>(count, horizon, dim);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t t = 0; t < horizon; ++t)
        for (std::size_t c = 0; c < dim; ++c) cloud->at(i, t, c) = symbolic ? double(pick(rng, 0, 2)) : unit(rng);
    const auto metric = symbolic ? bowen::BaseMetric::discrete() : bowen::BaseMetric::euclidean();
    const std::string label = std::to_string(count) + " sequences, horizon " + std::to_string(horizon) +
                              (symbolic ? ", discrete" : ", euclidean dim " + std::to_string(dim));

    std::vector<std::size_t> ns = iota_n(horizon);
    for (auto& n : ns) ++n;
    std::vector<std::vector<DistanceMatrix>> mats;  // [p][n-1]
    for (double p : ps) {
      bowen::DnpSeq seq(cloud, metric, p);
      std::vector<DistanceMatrix> per_n;
      seq.sweep(ns, [&](std::size_t, const DistanceMatrix& d) { per_n.push_back(d); });
      for (std::size_t n = 1; n <= horizon; ++n) {
        const DistanceMatrix& d = per_n[n - 1];
        rec.expect(bowen::check_semimetric(d, 1e-9).empty(), "d_{n,p} is a semimetric",
                   [&] { return label + ", p=" + fmt(p) + ", n=" + std::to_string(n); });
        if (n > 1) {
          bool inc = true;
          for (std::size_t i = 0; i < d.data().size(); ++i) inc = inc && per_n[n - 2].data()[i] <= d.data()[i];
          rec.expect(inc, "d_{n,p} increasing in n", [&] { return label + ", p=" + fmt(p); });
        }
        for (std::size_t i = 0; i < count; ++i)
          for (std::size_t j = 0; j < count; ++j) {
            const double e = seq.eval(n, i, j);
            if (e != d(i, j)) {
              rec.expect(false, "sweep equals pointwise d_{n,p}", [&] {
                return label + ", p=" + fmt(p) + ": " + fmt(e) + " vs " + fmt(d(i, j));
              });
            }
          }
      }
      mats.push_back(std::move(per_n));
    }
    // p-monotonicity of the semimetrics and of separated counts
    for (std::size_t a = 0; a + 1 < std::size(ps); ++a) {
      for (std::size_t n = 1; n <= horizon; ++n) {
        const DistanceMatrix &dp = mats[a][n - 1], &dq = mats[a + 1][n - 1];
        bool le = true;
        for (std::size_t i = 0; i < dp.data().size(); ++i) le = le && dq.data()[i] <= dp.data()[i] * (1 + 1e-12);
        rec.expect(le, "d_{n,q} <= d_{n,p} for p <= q", [&] { return label + ", p=" + fmt(ps[a]); });
        for (double e : {0.25, 0.5, 0.9}) {
          const std::size_t s_inf = bowen::count_separated(mats.back()[n - 1], e).value;
          const std::size_t s_p = bowen::count_separated(dp, e).value;
          rec.expect(s_inf <= s_p, "N^s under d_{n,inf} <= under d_{n,p}",
                     [&] { return label + ", p=" + fmt(ps[a]) + ", eps=" + fmt(e); });
          // d_{n,p} < eps^{q/p} forces d_{n,q} < eps when eps < 1
          const double q = ps[a + 1];
          if (std::isfinite(q)) {
            const double thr = std::pow(e, q / ps[a]);
            for (std::size_t i = 0; i < dp.data().size(); ++i)
              if (dp.data()[i] < thr)
                rec.expect(dq.data()[i] < e, "eps rescaling between p and q",
                           [&] { return label + ", p=" + fmt(ps[a]) + ", q=" + fmt(q) + ", eps=" + fmt(e); });
          }
        }
      }
    }
    // finite metric: below the minimal distance every p gives the p = inf counts
    if (symbolic) {
      for (std::size_t a = 0; a < std::size(ps); ++a)
        for (std::size_t n = 1; n <= horizon; ++n) {
          const std::size_t s_inf = bowen::count_separated(mats.back()[n - 1], 0.5).value;
          const std::size_t s_p = bowen::count_separated(mats[a][n - 1], 0.5).value;
          rec.expect(s_inf == s_p, "finite metric: N^s equal for all p below the minimal distance",
                     [&] { return label + ", p=" + fmt(ps[a]) + ", n=" + std::to_string(n); });
        }
    }
  }
  rec.finish();
  return rep;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"lemma-4.1", "counting", "schedule", "roundtrip",
                                                 "sft",       "fractal",  "product",  "dnp"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "lemma-4.1") return lemma_suite(cfg);
  if (name == "counting") return counting_suite(cfg);
  if (name == "schedule") return schedule_suite(cfg);
  if (name == "roundtrip") return roundtrip_suite(cfg);
  if (name == "sft") return sft_suite(cfg);
  if (name == "fractal") return fractal_suite(cfg);
  if (name == "product") return product_suite(cfg);
  if (name == "dnp") return dnp_suite(cfg);
  throw std::invalid_argument("unknown check suite '" + name + "'");
}

}  // namespace topent::checks
