#include "topent/schedule.hpp"

#include "topent/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topent {
namespace {

// Smallest multiple m*(c/d) with m*c > a, m*d > b and m*(d-c) >= b-a.
BlockPair next_pair(const BlockPair& prev, const Rational& s) {
  const auto c = static_cast<std::uint64_t>(s.num());
  const auto d = static_cast<std::uint64_t>(s.den());
  std::uint64_t m = std::max(prev.p / c + 1, prev.q / d + 1);
  const std::uint64_t gap = prev.q - prev.p;
  if (gap > 0) {
    if (d == c) throw std::logic_error("schedule: ratio 1 cannot follow a ratio below 1");
    m = std::max(m, (gap + (d - c) - 1) / (d - c));
  }
  return {m * c, m * d};
}

BlockSchedule build_from_ratios(const std::vector<Rational>& ratios, std::size_t count) {
  BlockSchedule out;
  out.pairs.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Rational& s = ratios[std::min(i, ratios.size() - 1)];
    if (i == 0) {
      out.pairs.push_back({static_cast<std::uint64_t>(s.num()), static_cast<std::uint64_t>(s.den())});
    } else {
      out.pairs.push_back(next_pair(out.pairs.back(), s));
    }
  }
  return out;
}

void require_unit_interval(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("schedule target must lie in (0, 1]");
}

}  // namespace

std::vector<std::string> check_schedule(const BlockSchedule& s, double sup_tolerance) {
  std::vector<std::string> out;
  if (s.pairs.empty()) {
    out.emplace_back("schedule has no pairs");
    return out;
  }
  const double r = s.target;
  for (std::size_t i = 0; i < s.pairs.size(); ++i) {
    const auto& cur = s.pairs[i];
    const std::string at = "pair " + std::to_string(i + 1) + " (" + std::to_string(cur.p) + "," +
                           std::to_string(cur.q) + ")";
    if (cur.p == 0 || cur.q == 0) out.push_back(at + ": entries must be positive");
    if (cur.p > cur.q) out.push_back(at + ": p > q");
    const double ratio = static_cast<double>(cur.p) / static_cast<double>(cur.q);
    if (ratio > r + 1e-12) out.push_back(at + ": ratio exceeds the target");
    if (i == 0) continue;
    const auto& prev = s.pairs[i - 1];
    if (cur.p <= prev.p) out.push_back(at + ": p not strictly increasing");
    if (cur.q <= prev.q) out.push_back(at + ": q not strictly increasing");
    if (cur.q >= prev.q && cur.p >= prev.p && cur.q - prev.q < cur.p - prev.p)
      out.push_back(at + ": q-step smaller than p-step");
    // p/q nondecreasing, compared exactly
    if (static_cast<__int128>(prev.p) * cur.q > static_cast<__int128>(cur.p) * prev.q)
      out.push_back(at + ": ratio decreased");
  }
  const auto& last = s.pairs.back();
  const double last_ratio = static_cast<double>(last.p) / static_cast<double>(last.q);
  if (s.target_rational) {
    if (Rational(static_cast<std::int64_t>(last.p), static_cast<std::int64_t>(last.q)) !=
        *s.target_rational)
      out.push_back("last ratio differs from the rational target");
  } else if (r - last_ratio > sup_tolerance) {
    out.push_back("last ratio is not within tolerance of the target");
  }
  return out;
}

BlockSchedule build_schedule(const Rational& r, std::size_t count) {
  require_unit_interval(r.to_double());
  if (count == 0) throw std::invalid_argument("schedule needs at least one pair");
  BlockSchedule out = build_from_ratios({r}, count);
  out.target = r.to_double();
  out.target_rational = r;
  return out;
}

BlockSchedule build_schedule(double r, std::size_t count) {
  require_unit_interval(r);
  if (count == 0) throw std::invalid_argument("schedule needs at least one pair");

  // Continued-fraction convergents h/k; the even-indexed ones approach r
  // from below. Denominators are capped so pair arithmetic stays exact.
  constexpr std::int64_t kMaxDen = 1'000'000;
  std::vector<Rational> below;
  std::int64_t h_prev = 0, h = 1;   // h_{-2}, h_{-1}
  std::int64_t k_prev = 1, kk = 0;  // k_{-2}, k_{-1}
  double x = r;
  bool exact = false;
  for (int i = 0; i < 64; ++i) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t h_next = ai * h + h_prev;
    const std::int64_t k_next = ai * kk + k_prev;
    if (k_next > kMaxDen) break;
    h_prev = h;
    k_prev = kk;
    h = h_next;
    kk = k_next;
    const Rational c(h, kk);
    if (c.num() > 0 && c.to_double() <= r && (below.empty() || below.back() < c)) below.push_back(c);
    const double frac = x - a;
    if (frac < 1e-15) {
      exact = true;
      break;
    }
    x = 1.0 / frac;
  }
  if (below.empty()) {
    // r below 1/kMaxDen: fall back to a decimal truncation.
    below.emplace_back(std::max<std::int64_t>(1, static_cast<std::int64_t>(r * kMaxDen)), kMaxDen);
  }
  BlockSchedule out = build_from_ratios(below, count);
  out.target = r;
  if (exact && below.back().to_double() == r) out.target_rational = below.back();
  return out;
}

BlockSchedule build_schedule_covering(const Rational& r, std::uint64_t n) {
  const auto q = static_cast<std::uint64_t>(r.den());
  return build_schedule(r, static_cast<std::size_t>(std::max<std::uint64_t>(1, (n + q - 1) / q)));
}

namespace {

// Coordinates [start, start + width) form a block whose last `free` entries are free.
struct BlockSpan {
  std::uint64_t start, width, free;
};

template <class Fn>
void walk_blocks(const BlockSchedule& s, std::uint64_t n, Fn&& fn) {
  std::uint64_t p_prev = 0, q_prev = 0;
  for (const auto& pr : s.pairs) {
    if (q_prev >= n) return;
    fn(BlockSpan{q_prev, pr.q - q_prev, pr.p - p_prev});
    p_prev = pr.p;
    q_prev = pr.q;
  }
  if (s.pairs.empty()) return;
  const std::uint64_t width = s.pairs.size() == 1 ? s.pairs[0].q : s.pairs.back().q - s.pairs[s.pairs.size() - 2].q;
  const std::uint64_t free = s.pairs.size() == 1 ? s.pairs[0].p : s.pairs.back().p - s.pairs[s.pairs.size() - 2].p;
  while (q_prev < n) {
    fn(BlockSpan{q_prev, width, free});
    q_prev += width;
  }
}

}  // namespace

std::uint64_t free_coordinates(const BlockSchedule& s, std::uint64_t n) {
  std::uint64_t total = 0;
  walk_blocks(s, n, [&](const BlockSpan& b) {
    const std::uint64_t frozen = b.width - b.free;
    const std::uint64_t seen = std::min(b.width, n - b.start);
    if (seen > frozen) total += seen - frozen;
  });
  return total;
}

bool is_free_coordinate(const BlockSchedule& s, std::uint64_t index) {
  bool result = false;
  walk_blocks(s, index + 1, [&](const BlockSpan& b) {
    if (index >= b.start && index < b.start + b.width) result = index - b.start >= b.width - b.free;
  });
  return result;
}

SeqSetExpr schedule_to_seqset(const BlockSchedule& schedule, std::uint32_t alphabet_size, Symbol z) {
  return cyl_sched(alphabet_size, BlockPlan{schedule, z});
}

}  // namespace topent
