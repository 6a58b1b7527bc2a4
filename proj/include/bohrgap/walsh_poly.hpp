#ifndef BOHRGAP_WALSH_POLY_HPP
#define BOHRGAP_WALSH_POLY_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bohrgap/params.hpp"

namespace bohrgap {

using cplx = std::complex<double>;

/// A point (z^(1), ..., z^(M)) with block j of length r_j.
struct TorusPoint {
  std::vector<std::vector<cplx>> blocks;

  std::size_t coordinate_count() const;
  /// Largest | |z| - 1 | over all coordinates.
  double max_modulus_defect() const;
  /// Largest |z| over all coordinates.
  double max_modulus() const;
};

/// The M-homogeneous polynomial
///   Q(z) = sum_{i_1..i_M} z^(1)_{i_1} ... z^(M)_{i_M} w_{r_2}^{i_1 i_2} ... w_{r_M}^{i_{M-1} i_M}
/// with w_r = exp(2 pi i / r). The trailing size r_{M+1} used by the Walsh
/// cascade is r_M.
class WalshPolynomial {
 public:
  WalshPolynomial(const ConstructionParams& params, int L);
  /// Block sizes given directly; must be nondecreasing and nonzero.
  explicit WalshPolynomial(std::vector<std::size_t> r, int level = 0);

  int degree() const noexcept { return static_cast<int>(r_.size()); }
  int level() const noexcept { return level_; }
  const std::vector<std::size_t>& block_sizes() const noexcept { return r_; }
  std::size_t next_block_size() const noexcept { return r_.back(); }
  std::size_t monomial_count() const noexcept;

  /// w_{r_{k+1}}^{e} for the link between block k and k+1 (0-based k,
  /// k = M-1 is the final link into r_{M+1}). `e` is reduced mod r exactly.
  cplx link_root(std::size_t k, std::uint64_t e) const noexcept {
    const auto& tab = roots_[k];
    return tab[e % tab.size()];
  }

  /// Throws InvalidParameter unless z has the right block lengths.
  void check_shape(const TorusPoint& z) const;
  TorusPoint ones() const;

 private:
  void build_tables();

  std::vector<std::size_t> r_;
  int level_ = 0;
  std::vector<std::vector<cplx>> roots_;
};

/// Coefficient of monomial (i_1..i_M):
/// exp(2 pi i (i_1 i_2 / r_2 + ... + i_{M-1} i_M / r_M)), each product reduced mod r_j first.
cplx q_coefficient(const WalshPolynomial& poly, std::span<const std::uint32_t> idx);

/// Monomial-by-monomial sum in lexicographic multi-index order.
cplx evaluate_direct(const WalshPolynomial& poly, const TorusPoint& z);

/// Coordinate 0 of B^{M+1,M} D^(M) ... B^{2,1} D^(1) u, u = (1,...,1).
cplx evaluate_cascade(const WalshPolynomial& poly, const TorusPoint& z);

/// ||B v||^2 / (r2 ||v||^2) for the r2 x r1 Walsh matrix b_ij = w_{r2}^{ij}.
double walsh_norm_identity_check(std::size_t r1, std::size_t r2, std::span<const cplx> v);

/// r_1 ... r_M (every coefficient has modulus one).
std::uint64_t wiener_norm(const WalshPolynomial& poly);
/// sqrt(r_1 ... r_M r_{M+1}) with r_{M+1} = r_M.
double sup_norm_upper(const WalshPolynomial& poly);
/// (r_1 ... r_M)^{(M+1)/(2M)}; the sup norm is at least this divided by the
/// (unknown) Bohnenblust-Hille constant D_M.
double bh_certificate(const WalshPolynomial& poly);

/// dQ/dz^(j)_i for all i in block j (0-based). Q is linear in each block, so
/// Q(z) = sum_i g_i z^(j)_i with g independent of block j.
std::vector<cplx> block_gradient(const WalshPolynomial& poly, const TorusPoint& z, std::size_t j);

/// A torus point certifying a lower bound on the sup norm.
struct SupNormWitness {
  TorusPoint point;
  double value = 0;  ///< |Q(point)|
  cplx q_value{};    ///< Q(point)
  cplx beta{1.0, 0.0};
  cplx tau{1.0, 0.0};          ///< unit phase with beta * tau * Q(point) = |Q(point)|
  TorusPoint normalized_point;  ///< point with block 1 multiplied by tau
  std::vector<double> history;  ///< best value after each sweep, across starts
  std::size_t sweeps = 0;
  std::size_t starts = 0;
};

/// Fills value, q_value, tau and normalized_point for `point`.
SupNormWitness make_witness(const WalshPolynomial& poly, TorusPoint point, cplx beta = {1.0, 0.0});

/// Cyclic single-phase ascent of |Q| from `start` until a sweep improves by at
/// most `tol` or `max_sweeps` is reached. Returns |Q| after every sweep (first
/// entry is the starting value); `start` is updated in place.
std::vector<double> phase_ascent(const WalshPolynomial& poly, TorusPoint& start, std::size_t max_sweeps,
                                 double tol = 1e-10);

/// Multi-start phase ascent. `budget` is the total number of sweeps shared by
/// all starts; starts are random unit-modulus points drawn from `seed`.
SupNormWitness sup_norm_lower_search(const WalshPolynomial& poly, std::size_t budget, std::uint64_t seed,
                                     cplx beta = {1.0, 0.0});

/// Ascent of Re(beta Q) with every coordinate's phase kept within
/// `half_angle` of the phase of the same coordinate of `center`. Returns the
/// final point.
TorusPoint constrained_ascent(const WalshPolynomial& poly, const TorusPoint& center, double half_angle, cplx beta,
                              std::size_t max_sweeps, double tol = 1e-12);

/// Uniform random point on the torus.
template <class Rng>
TorusPoint random_torus_point(const WalshPolynomial& poly, Rng& rng);

}  // namespace bohrgap

#include "bohrgap/detail/random_torus.hpp"

#endif  // BOHRGAP_WALSH_POLY_HPP
