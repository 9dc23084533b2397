#include "topent/entropy.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace topent {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Exact {
  double value;
  std::string tag;
};

using MaybeExact = std::optional<Exact>;

MaybeExact exact_impl(const SeqSetExpr& e);

MaybeExact wrap(const MaybeExact& inner, const char* tag, double (*fn)(double, std::size_t), std::size_t k) {
  if (!inner) return std::nullopt;
  return Exact{fn(inner->value, k), std::string(tag) + "(" + inner->tag + ")"};
}

bool injective(const SymbolMap& m) {
  std::vector<Symbol> t = m.table;
  std::sort(t.begin(), t.end());
  return std::adjacent_find(t.begin(), t.end()) == t.end();
}

MaybeExact exact_impl(const SeqSetExpr& e) {
  return std::visit(
      Overloaded{
          [](const nodes::FullShift& s) -> MaybeExact { return Exact{std::log(double(s.k)), "full-shift log k"}; },
          [](const nodes::EvConst& s) -> MaybeExact { return Exact{std::log(double(s.k)), "eventually-constant log k"}; },
          [](const nodes::SRSet& s) -> MaybeExact {
            return Exact{s.r.to_double() * std::log(double(s.k)), "sr r log k"};
          },
          [](const nodes::CylSched& s) -> MaybeExact {
            return std::visit(
                Overloaded{
                    [](const SubsetSequence& seq) -> MaybeExact {
                      double sum = 0.0;
                      for (const auto& z : seq.period) sum += std::log(double(z.size()));
                      return Exact{sum / double(seq.period.size()), "cylinder period mean log |Z_i|"};
                    },
                    [&](const BlockPlan& plan) -> MaybeExact {
                      const auto& p = plan.schedule.pairs;
                      const double dp = double(p.size() == 1 ? p[0].p : p.back().p - p[p.size() - 2].p);
                      const double dq = double(p.size() == 1 ? p[0].q : p.back().q - p[p.size() - 2].q);
                      return Exact{dp / dq * std::log(double(s.k)), "block schedule tail ratio log k"};
                    },
                },
                s.schedule);
          },
          [](const nodes::Orbit&) -> MaybeExact { return Exact{0.0, "finite orbit set"}; },
          [](const nodes::FiniteSet&) -> MaybeExact { return Exact{0.0, "finite set"}; },
          [](const nodes::OrbitSV& s) -> MaybeExact {
            return Exact{log_spectral_radius(s.relation), "vertex shift log spectral radius"};
          },
          [](const nodes::Shift& s) -> MaybeExact {
            return wrap(exact_impl(s.inner), "shift-invariant", [](double v, std::size_t) { return v; }, s.k);
          },
          [](const nodes::Dilate& s) -> MaybeExact {
            return wrap(exact_impl(s.inner), "dilation /k", [](double v, std::size_t k) { return v / double(k); }, s.k);
          },
          [](const nodes::Block& s) -> MaybeExact {
            return wrap(exact_impl(s.inner), "blocking *k", [](double v, std::size_t k) { return v * double(k); }, s.k);
          },
          [](const nodes::Closure& s) -> MaybeExact {
            return wrap(exact_impl(s.inner), "closure", [](double v, std::size_t) { return v; }, 0);
          },
          [](const nodes::Union& s) -> MaybeExact {
            auto a = exact_impl(s.left), b = exact_impl(s.right);
            if (!a || !b) return std::nullopt;
            return Exact{std::max(a->value, b->value), "union max(" + a->tag + ", " + b->tag + ")"};
          },
          [](const nodes::DisjointUnion& s) -> MaybeExact {
            auto a = exact_impl(s.left), b = exact_impl(s.right);
            if (!a || !b) return std::nullopt;
            return Exact{std::max(a->value, b->value), "disjoint union max(" + a->tag + ", " + b->tag + ")"};
          },
          [](const nodes::Product& s) -> MaybeExact {
            // H(S) <= H(S x T) <= H(S) + H(T), so a zero factor pins the value.
            auto a = exact_impl(s.left), b = exact_impl(s.right);
            if (a && b && a->value == 0.0) return Exact{b->value, "product with zero factor(" + b->tag + ")"};
            if (a && b && b->value == 0.0) return Exact{a->value, "product with zero factor(" + a->tag + ")"};
            return std::nullopt;
          },
          [](const nodes::Restrict& s) -> MaybeExact {
            auto a = exact_impl(s.inner);
            if (!a) return std::nullopt;
            if (s.k == 1) return Exact{a->value, "restriction k=1(" + a->tag + ")"};
            if (a->value == 0.0) return Exact{0.0, "restriction of zero(" + a->tag + ")"};
            return std::nullopt;
          },
          [](const nodes::Image& s) -> MaybeExact {
            auto a = exact_impl(s.inner);
            if (!a) return std::nullopt;
            if (injective(s.map)) return Exact{a->value, "injective image(" + a->tag + ")"};
            if (a->value == 0.0) return Exact{0.0, "image of zero(" + a->tag + ")"};
            return std::nullopt;
          },
      },
      e.node().value);
}

bool nonincreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] > v[i - 1]) return false;
  return true;
}

bool nondecreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] < v[i - 1]) return false;
  return true;
}

}  // namespace

std::vector<std::string> CountSeries::check() const {
  std::vector<std::string> out;
  if (entries.empty()) out.emplace_back("count series is empty");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [n, c] = entries[i];
    if (n == 0) out.push_back("entry " + std::to_string(i) + ": length must be >= 1");
    if (i > 0 && n <= entries[i - 1].first) out.push_back("entry " + std::to_string(i) + ": lengths not increasing");
    if (c < 1) out.push_back("entry " + std::to_string(i) + ": count must be >= 1");
    if (alphabet_size && c > ipow(*alphabet_size, n))
      out.push_back("entry " + std::to_string(i) + ": count exceeds k^n");
  }
  return out;
}

CountSeries count_series(const SeqSetExpr& expr, std::size_t n_max, const Budget& budget) {
  CountSeries s;
  s.alphabet_size = expr.alphabet_size();
  for (std::size_t n = 1; n <= n_max; ++n) s.entries.emplace_back(n, count_prefixes(expr, n, budget));
  return s;
}

const char* to_string(EstimateMode mode) {
  switch (mode) {
    case EstimateMode::exact: return "exact";
    case EstimateMode::tail_max: return "tail-max";
    case EstimateMode::regression: return "regression";
  }
  return "?";
}

std::optional<EstimateMode> parse_estimate_mode(const std::string& name) {
  if (name == "exact") return EstimateMode::exact;
  if (name == "tail-max") return EstimateMode::tail_max;
  if (name == "regression") return EstimateMode::regression;
  return std::nullopt;
}

EntropyEstimate entropy_estimate(const CountSeries& series, const EstimatorConfig& cfg) {
  if (series.entries.empty()) throw std::invalid_argument("entropy_estimate: empty series");
  if (const auto problems = series.check(); !problems.empty())
    throw std::invalid_argument("entropy_estimate: " + problems.front());
  if (cfg.mode == EstimateMode::exact)
    throw std::invalid_argument("entropy_estimate: exact mode needs an expression, not a series");

  EntropyEstimate est;
  est.mode = cfg.mode;
  const std::size_t total = series.entries.size();
  std::vector<double> logs;
  logs.reserve(total);
  est.ns.reserve(total);
  est.rates.reserve(total);
  for (const auto& [n, c] : series.entries) {
    est.ns.push_back(n);
    logs.push_back(log_count(c));
    est.rates.push_back(logs.back() / double(n));
  }
  est.window = cfg.window == 0 ? (total + 2) / 3 : std::min(cfg.window, total);
  const std::size_t first = total - est.window;

  double value = 0.0;
  if (cfg.mode == EstimateMode::tail_max) {
    value = *std::max_element(est.rates.begin() + static_cast<std::ptrdiff_t>(first), est.rates.end());
  } else if (est.window == 1) {
    value = est.rates.back();
  } else {
    double mx = 0, my = 0;
    for (std::size_t i = first; i < total; ++i) {
      mx += double(est.ns[i]);
      my += logs[i];
    }
    mx /= double(est.window);
    my /= double(est.window);
    double sxy = 0, sxx = 0;
    for (std::size_t i = first; i < total; ++i) {
      sxy += (double(est.ns[i]) - mx) * (logs[i] - my);
      sxx += (double(est.ns[i]) - mx) * (double(est.ns[i]) - mx);
    }
    value = sxy / sxx;
  }
  const double upper = series.alphabet_size ? std::log(double(*series.alphabet_size)) : INFINITY;
  const double clamped = std::clamp(value, 0.0, upper);
  est.clamped = clamped != value;
  est.value = clamped;

  const std::vector<double> tail(est.rates.begin() + static_cast<std::ptrdiff_t>(first), est.rates.end());
  est.rates_nonincreasing = nonincreasing(tail);
  est.rates_nondecreasing = nondecreasing(tail);
  return est;
}

std::optional<EntropyEstimate> entropy_exact(const SeqSetExpr& expr) {
  if (!validate(expr).empty()) return std::nullopt;
  auto r = exact_impl(expr);
  if (!r) return std::nullopt;
  EntropyEstimate est;
  est.mode = EstimateMode::exact;
  est.value = r->value;
  est.proof_tag = r->tag;
  return est;
}

DivergenceWitness divergence_witness(std::uint32_t k_max) {
  if (k_max < 1) throw std::invalid_argument("divergence_witness: k_max must be >= 1");
  DivergenceWitness w;
  for (std::uint32_t k = 1; k <= k_max; ++k) w.rows.emplace_back(k, entropy_exact(ev_const(k, 0))->value);
  w.limit.value = std::numeric_limits<double>::infinity();
  w.limit.mode = EstimateMode::exact;
  w.limit.proof_tag = "infinite alphabet: sup over finite subspaces of log k";
  return w;
}

double log_spectral_radius(const TransitionRelation& relation) {
  const auto k = static_cast<Eigen::Index>(relation.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Symbol j : relation.successors[static_cast<std::size_t>(i)]) a(i, static_cast<Eigen::Index>(j)) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  double rho = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) rho = std::max(rho, std::abs(solver.eigenvalues()[i]));
  // every row is nonempty, so rho >= 1
  return std::log(std::max(rho, 1.0));
}

}  // namespace topent
