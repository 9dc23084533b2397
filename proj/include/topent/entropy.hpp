#pragma once

#include "topent/count.hpp"
#include "topent/symbolic.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace topent {

/// n -> N(S, U^n) for a range of lengths.
struct CountSeries {
  std::vector<std::pair<std::size_t, Count>> entries;  // n strictly increasing, n >= 1
  std::string source;
  std::optional<std::uint32_t> alphabet_size;

  std::vector<std::string> check() const;
};

/// Counts for n = 1..n_max.
CountSeries count_series(const SeqSetExpr& expr, std::size_t n_max, const Budget& budget = {});

enum class EstimateMode { exact, tail_max, regression };

const char* to_string(EstimateMode mode);
std::optional<EstimateMode> parse_estimate_mode(const std::string& name);

struct EntropyEstimate {
  double value = 0.0;  // nats; may be +inf
  EstimateMode mode = EstimateMode::exact;
  std::string proof_tag;  // closed form used; exact mode only

  // per-n diagnostics, empty in exact mode
  std::vector<std::size_t> ns;
  std::vector<double> rates;  // a_n = log(count_n) / n
  std::size_t window = 0;
  bool rates_nonincreasing = false;
  bool rates_nondecreasing = false;
  bool clamped = false;
};

struct EstimatorConfig {
  EstimateMode mode = EstimateMode::tail_max;
  std::size_t window = 0;  // 0 -> ceil(N / 3)
  std::size_t max_n = 24;
};

/// limsup of a_n from finite data: the maximum (tail-max) or the least-squares
/// slope of log count (regression) over the last `window` entries, clamped
/// to [0, log k] when the alphabet is known.
/// Throws std::invalid_argument on an empty or malformed series.
EntropyEstimate entropy_estimate(const CountSeries& series, const EstimatorConfig& cfg = {});

/// Structural recursion through the equalities available for each node.
/// Returns std::nullopt where only an inequality is known.
std::optional<EntropyEstimate> entropy_exact(const SeqSetExpr& expr);

struct DivergenceWitness {
  std::vector<std::pair<std::uint32_t, double>> rows;  // (k, entropy of the k-symbol subspace)
  EntropyEstimate limit;                                // +inf
};

/// Entropies of the embedded k-symbol eventually-constant sets, k = 1..k_max.
DivergenceWitness divergence_witness(std::uint32_t k_max);

/// Log of the spectral radius of the adjacency matrix of a relation.
double log_spectral_radius(const TransitionRelation& relation);

}  // namespace topent
