#ifndef BOHRGAP_KRONECKER_SEARCH_HPP
#define BOHRGAP_KRONECKER_SEARCH_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bohrgap/params.hpp"
#include "bohrgap/prime_lattice.hpp"
#include "bohrgap/walsh_poly.hpp"

namespace bohrgap {

/// One coordinate to approximate: p_k^{-it} should land within `delta` of `target`.
struct TargetEntry {
  std::uint64_t prime_index = 0;
  std::uint64_t prime = 0;
  cplx target{1.0, 0.0};
  double delta = 0.1;
  int level = 0;
  int block = 0;  ///< 1-based j
  std::size_t i = 0;
};

struct ApproximationTarget {
  std::vector<TargetEntry> entries;
  std::vector<int> levels;

  /// Unit targets, positive tolerances, distinct prime indices.
  void validate() const;
  double max_log_prime() const;
  double min_delta() const;
};

struct SearchResult {
  double t = 0;
  std::vector<double> residuals;
  bool achieved = false;
  std::size_t scanned = 0;
  double worst_ratio = 0;  ///< max over entries of residual / delta
};

/// p^{-it}.
cplx prime_pow_minus_it(std::uint64_t p, double t);

/// Residuals |p^{-it} - y| per entry and the worst residual/delta ratio.
SearchResult evaluate_t(const ApproximationTarget& target, double t);

/// Flattens witnesses into targets: block 1 of level L uses tau_L z*, the other
/// blocks z*, where tau_L makes beta_L tau_L Q^L(z*) real positive.
ApproximationTarget assemble_targets(std::span<const LevelLattice> lattices,
                                     const std::map<int, SupNormWitness>& witnesses,
                                     const std::map<int, cplx>& betas, const std::map<int, double>& deltas);

/// (min delta) / (max ln p): consecutive grid points move every coordinate by at most delta.
double default_step(const ApproximationTarget& target);

/// Scans t = 0, step, 2 step, ..., t_max. Returns the smallest t meeting every
/// tolerance, otherwise the t with the smallest worst ratio (ties to smaller t).
SearchResult grid_search_t(const ApproximationTarget& target, double t_max, double step);

/// Minimizes the worst ratio on [t0 - radius, t0 + radius] by a fine grid and
/// golden-section polish. Never returns a worse t than t0.
SearchResult refine_t(const ApproximationTarget& target, double t0, double radius);

/// max(2^{-(2M+1)L}, 0.05)
double default_delta(int M, int L);

/// L_K = ceil(2^{M+1} K).
int levels_for_target(int M, double K);

enum class WitnessMode {
  /// witnesses from unconstrained multi-start search, then a grid search for t
  fixed,
  /// at each grid t, the witness is the best point of the delta-box around the trajectory
  trajectory,
};

struct DemonstrationOptions {
  double t_max = 1e6;
  std::optional<double> step;
  std::uint64_t seed = 0;
  std::size_t witness_budget = 2000;
  /// trajectory mode: accept a box witness only if its value is at least this
  /// fraction of the multi-start reference value
  double value_fraction = 0.99;
  WitnessMode mode = WitnessMode::trajectory;
  std::map<int, double> deltas;  ///< empty: default_delta
  std::map<int, cplx> betas;     ///< empty: all beta_L = 1
};

struct LevelReport {
  int L = 0;
  double witness_value = 0;
  double reference_value = 0;
  double residual_max = 0;
  double delta = 0;
  double error_budget = 0;
  cplx polynomial_value{};  ///< beta_L P_L(i t_K)
};

struct DemonstrationReport {
  double K = 0;
  int L_K = 0;
  double t_K = 0;
  std::uint64_t N_K = 0;
  cplx partial_sum{};
  double witness_sum = 0;  ///< sum_L 2^{-XL} witness value
  double error_budget = 0;
  double bound = 0;  ///< witness_sum - error_budget
  double deviation = 0;  ///< |partial_sum - sum_L beta_L 2^{-XL} Q^L(targets)|
  bool achieved = false;
  std::size_t scanned = 0;
  double t_max = 0;
  double step = 0;
  std::uint64_t seed = 0;
  std::string witness_mode;
  std::vector<LevelReport> per_level;
};

/// Thrown when no t within t_max meets the tolerances.
class SearchExhausted : public std::runtime_error {
 public:
  SearchExhausted(const std::string& what, DemonstrationReport best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const DemonstrationReport& best() const noexcept { return best_; }

 private:
  DemonstrationReport best_;
};

/// Finds t_K with |sum_{n <= N_K} a_n n^{-i t_K}| at least the witness sum minus
/// the error budget. L_K = ceil(2^{M+1} K).
DemonstrationReport demonstrate_large_partial_sum(const ConstructionParams& params, double K,
                                                  const DemonstrationOptions& options = {});
/// Same with the number of levels given directly.
DemonstrationReport demonstrate_levels(const ConstructionParams& params, int L_K,
                                       const DemonstrationOptions& options = {});

}  // namespace bohrgap

#endif  // BOHRGAP_KRONECKER_SEARCH_HPP
