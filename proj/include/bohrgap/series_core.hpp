#ifndef BOHRGAP_SERIES_CORE_HPP
#define BOHRGAP_SERIES_CORE_HPP

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bohrgap/params.hpp"
#include "bohrgap/prime_lattice.hpp"
#include "bohrgap/rational.hpp"
#include "bohrgap/walsh_poly.hpp"

namespace bohrgap {

/// One nonzero coefficient a_n = beta * magnitude * phase.
struct CoefficientTerm {
  std::uint64_t n = 0;
  std::vector<std::uint32_t> idx;
  int level = 0;
  cplx phase{1.0, 0.0};
  double magnitude = 0;
  cplx beta{1.0, 0.0};

  cplx value() const { return beta * magnitude * phase; }
};

/// Per-level unit multipliers beta_L with the sign exponents d_L that produced them.
struct SignAssignment {
  double epsilon = 0;
  std::map<int, cplx> betas;
  std::map<int, int> dees;
  std::map<int, double> omega_abs;
  std::map<int, double> running_sum;  ///< greedy partial sum S after level L

  /// beta_L, defaulting to 1 for levels without an entry.
  cplx beta(int L) const;
};

/// A record of partial sums A_N(s) along the ascending-n order.
struct TracePoint {
  std::uint64_t N = 0;
  cplx value{};
  int level = 0;
  bool boundary = false;
};

struct PartialSumTrace {
  cplx s{};
  std::vector<TracePoint> checkpoints;
  std::vector<std::uint64_t> level_boundaries;

  /// Value at the boundary of level L (the last n of Pi_L^x).
  std::optional<cplx> boundary_value(int L) const;
};

/// The series f(s) = sum a_n n^{-s} truncated to the levels it was built with.
class DirichletSeries {
 public:
  DirichletSeries(ConstructionParams params, std::vector<LevelLattice> lattices, SignAssignment signs = {});
  DirichletSeries(const ConstructionParams& params, int max_level, SignAssignment signs = {});

  const ConstructionParams& params() const noexcept { return params_; }
  const std::vector<LevelLattice>& lattices() const noexcept { return *lattices_; }
  const SignAssignment& signs() const noexcept { return signs_; }
  void set_signs(SignAssignment signs) { signs_ = std::move(signs); }

  /// gamma_n for each product-set entry of level L, in ascending-n order.
  const std::vector<cplx>& phases(int L) const;
  const LevelLattice& lattice(int L) const;
  int max_level() const noexcept { return static_cast<int>(lattices_->size()); }
  /// 2^{-X L}
  double magnitude(int L) const;

  /// All nonzero terms in ascending n.
  std::vector<CoefficientTerm> terms() const;

 private:
  ConstructionParams params_;
  std::shared_ptr<const std::vector<LevelLattice>> lattices_;
  std::vector<std::vector<cplx>> phases_;
  SignAssignment signs_;
};

/// gamma_n for every entry of the lattice, ascending n.
std::vector<cplx> level_phases(const LevelLattice& lattice);

/// a_n, zero when n lies in no product set.
cplx coefficient(const DirichletSeries& series, std::uint64_t n);

/// sum of gamma_n over n in Pi_L^x with n <= P, ascending order.
cplx prefix_phase_sum(const LevelLattice& lattice, std::uint64_t P);

struct KeyEstimateScan {
  double max_abs = 0;
  std::uint64_t attaining_p = 0;
};
/// Largest |prefix_phase_sum| over every threshold P.
KeyEstimateScan key_estimate_scan(const LevelLattice& lattice);
/// 2^{(rho_1 + ... + rho_{M-2} + rho_M) L} L, the scale of the prefix-sum estimate.
double key_estimate_scale(const ConstructionParams& params, int L);

/// Omega_L(eps) = sum over Pi_L^x of gamma_n n^eps.
cplx omega_L(const LevelLattice& lattice, double epsilon);
/// Gamma(N, eps): the same sum restricted to n <= N. Throws InvalidParameter
/// when N is below the level's smallest n (the level would not be L*(N)).
cplx gamma_partial(const LevelLattice& lattice, std::uint64_t N, double epsilon);
/// The level's Dirichlet polynomial P_L(s) = sum gamma_n n^{-s}, ascending order.
cplx level_polynomial(const LevelLattice& lattice, cplx s);
/// Torus point z^(j)_i = p_{k_i^(j)}^{-s}, so that Q^L at it equals P_L(s).
TorusPoint dirichlet_point(const LevelLattice& lattice, cplx s);

/// n^{-s} = exp(-s ln n), phase reduced in extended precision.
cplx n_pow_minus_s(std::uint64_t n, cplx s);

/// |sum a_i b_i - (sum_{j<p} (a_j - a_{j+1}) B_j + a_p B_p)|.
double summation_by_parts_check(std::span<const double> a, std::span<const cplx> b);

/// eps = -(1/M)[(rho_1 + ... + rho_{M-2} + rho_M) - X]; throws NonPositiveEpsilon when eps <= 0.
double epsilon_for_convergence(const ConstructionParams& params);
/// Exact eps when rho is rational and X is the default.
std::optional<Rational> epsilon_exact(const ConstructionParams& params);

/// Greedy toward-zero signs: d_L = 0 if S <= 0 else 1, then S += (-1)^{d_L} t_L.
std::vector<int> greedy_sign_exponents(std::span<const double> magnitudes);

/// Signs making the level-boundary partial sums at s = -eps converge.
SignAssignment choose_signs(const ConstructionParams& params, std::span<const LevelLattice> lattices, double epsilon);

/// Accumulates a_n n^{-s} in ascending n; checkpoints every `checkpoint_every`
/// terms and at every level boundary.
PartialSumTrace partial_sum_trace(const DirichletSeries& series, cplx s, std::size_t checkpoint_every);

/// sum_{L' <= L} beta_{L'} 2^{-X L'} Q^{L'}(p^{-s}), computed through the Walsh cascade.
cplx level_decomposition(const DirichletSeries& series, cplx s, int L);

/// Trace rows as CSV: N,re,im,abs,level.
std::string trace_to_csv(const PartialSumTrace& trace);
/// Inverse of trace_to_csv (s is not part of the CSV).
PartialSumTrace trace_from_csv(const std::string& csv);

}  // namespace bohrgap

#endif  // BOHRGAP_SERIES_CORE_HPP
