#ifndef BOHRGAP_EXPERIMENTS_HPP
#define BOHRGAP_EXPERIMENTS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bohrgap/params.hpp"
#include "bohrgap/prime_lattice.hpp"
#include "bohrgap/rational.hpp"
#include "bohrgap/series_core.hpp"

namespace bohrgap {

/// Bumped whenever a report layout changes.
inline constexpr int kSchemaVersion = 1;

struct ExactAbscissaBounds {
  Rational sigma_b_upper;
  Rational sigma_b_lower;
  Rational sigma_a_lower;
  Rational sigma_c_upper;
  bool valid = false;
};

/// Bounds on the abscissae of f for X = (rho_1 + ... + rho_M)(M+1)/(2M):
///   sigma_c <= ((M-1)(rho_1+..+rho_{M-2}+rho_M) - (M+1) rho_{M-1}) / (2M^2)
///   0 <= sigma_b <= (1 - (rho_1+..+rho_M)/M) / (2M)
///   sigma_a >= (M-1)(rho_1+..+rho_M) / (2M^2)
struct AbscissaBounds {
  double sigma_b_upper = 0;
  double sigma_b_lower = 0;
  double sigma_a_lower = 0;
  double sigma_c_upper = 0;
  bool valid = false;  ///< sigma_c_upper < 0
  std::optional<ExactAbscissaBounds> exact;

  double gap_a_b() const { return sigma_a_lower - sigma_b_upper; }
  double gap_b_c() const { return sigma_b_lower - sigma_c_upper; }
};

/// Throws InvalidParameter if X was overridden: the bounds are stated for the default X.
AbscissaBounds abscissa_bounds(const ConstructionParams& params);

struct BoundednessRow {
  int L = 0;
  std::uint64_t min_n = 0;
  double max_abs = 0;  ///< max over sampled t of |2^{-XL} P_L(sigma + it)|
  double bound = 0;    ///< 2^{-XL} n_*^{-sigma} sqrt(r_1 ... r_M r_M)
  bool within_bound = true;
};

struct BoundednessReport {
  ConstructionParams params;
  double sigma = 0;
  std::size_t t_samples = 0;
  double t_range = 0;
  std::uint64_t seed = 0;
  double predicted_rate = 0;  ///< (rho_1+..+rho_M+1)/2 - sigma M - X, log2 per level
  double fitted_rate = 0;     ///< least-squares slope of log2(max_abs) against L
  bool passed = false;
  std::vector<BoundednessRow> rows;
};

/// Samples |P_L(sigma + it)| on random t in [0, t_range) for L = 1..Lmax.
BoundednessReport run_boundedness_experiment(const ConstructionParams& params, double sigma, int Lmax,
                                             std::size_t t_samples, std::uint64_t seed = 0, double t_range = 1e4);

struct DivergenceRow {
  int L = 0;
  double level_sum = 0;   ///< 2^{-XL} sum_{n in Pi_L^x} n^{-sigma}
  double cumulative = 0;
  double reference = 0;   ///< 2^{[(rho_1+..+rho_M) - sigma M - X] L} L^{-sigma M}
  double ratio = 0;
};

struct DivergenceReport {
  ConstructionParams params;
  double sigma = 0;
  double sigma_a_lower = 0;
  double exponent = 0;              ///< (rho_1+..+rho_M) - sigma M - X
  double calibrated_constant = 0;   ///< min ratio over levels
  double ratio_spread = 0;          ///< max ratio / min ratio
  bool below_sigma_a = false;
  bool growing_tail = false;        ///< level sums strictly increase over the last three levels
  bool passed = false;
  std::vector<DivergenceRow> rows;
};

/// Exact per-level absolute sums at real sigma.
DivergenceReport run_divergence_experiment(const ConstructionParams& params, double sigma, int Lmax);

struct ConvergenceRow {
  int L = 0;
  double omega_abs = 0;
  double term = 0;  ///< 2^{-XL} |Omega_L(eps)|
  int d = 0;
  double greedy_sum = 0;
  cplx boundary_value{};
  double tail_max = 0;  ///< max over the level's checkpoints of |A_N - A_{previous boundary}|
};

struct ConvergenceReport {
  ConstructionParams params;
  double epsilon = 0;
  bool epsilon_from_params = true;
  std::optional<int> decreasing_from;  ///< first L from which term is strictly decreasing through Lmax
  double decay_exponent = 0;           ///< fitted log2 slope of term over the last three levels
  double oscillation_last3 = 0;        ///< largest |A - A'| among the last three boundary values
  double max_decomposition_error = 0;  ///< relative, trace against the Omega sum
  bool terms_decay = false;            ///< decreasing_from exists and is <= 4
  bool oscillation_ok = false;         ///< oscillation_last3 <= 2 * last term
  bool passed = false;
  std::vector<ConvergenceRow> rows;
  PartialSumTrace trace;
};

/// Signs from choose_signs, trace at s = -eps. `epsilon` overrides the value
/// from epsilon_for_convergence (the parameter check still runs).
ConvergenceReport run_convergence_experiment(const ConstructionParams& params, int Lmax,
                                             std::optional<double> epsilon = std::nullopt,
                                             std::size_t checkpoint_every = 256);

struct VerificationReport {
  ConstructionParams params;
  int Lmax = 0;
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;
  double seconds = 0;
  bool passed() const;
};

/// Runs every module invariant on freshly built lattices.
VerificationReport run_full_verification(const ConstructionParams& params, int Lmax, std::uint64_t seed = 0);
/// Same on caller-supplied lattices (levels 1..n in order).
VerificationReport run_full_verification(const ConstructionParams& params, std::span<const LevelLattice> lattices,
                                         std::uint64_t seed = 0);

}  // namespace bohrgap

#endif  // BOHRGAP_EXPERIMENTS_HPP
