#ifndef BOHRGAP_PRIME_LATTICE_HPP
#define BOHRGAP_PRIME_LATTICE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bohrgap/params.hpp"

namespace bohrgap {

/// Largest prime index served by prime_at.
inline constexpr std::size_t kMaxPrimeIndex = std::size_t{1} << 24;
/// Largest product set build_level will materialize.
inline constexpr std::size_t kMaxProductSetSize = std::size_t{1} << 24;

/// The k-th prime, 1-based (prime_at(1) == 2). Backed by a shared table that
/// grows by sieving; safe to call concurrently. Throws CapacityError above
/// kMaxPrimeIndex.
std::uint64_t prime_at(std::size_t k);

/// All primes p with p <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Outcome of one structural or numerical check.
struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t violations = 0;
  std::string detail;
};

/// One level of the construction: index sets K_L^(j), prime blocks and the
/// product set Pi_L^x sorted ascending by n.
///
/// Products are stored flat: `n[pos]` is the integer and
/// `flat_index[pos*M .. pos*M+M)` its multi-index (i_1, ..., i_M).
struct LevelLattice {
  int level = 0;
  int M = 0;
  std::vector<std::size_t> r;
  std::vector<std::vector<std::uint64_t>> index_sets;
  std::vector<std::vector<std::uint64_t>> prime_blocks;
  std::vector<std::uint64_t> n;
  std::vector<std::uint32_t> flat_index;

  std::size_t size() const noexcept { return n.size(); }
  std::span<const std::uint32_t> index(std::size_t pos) const {
    return {flat_index.data() + pos * static_cast<std::size_t>(M), static_cast<std::size_t>(M)};
  }
  std::uint64_t min_n() const { return n.front(); }
  std::uint64_t max_n() const { return n.back(); }
  /// Position of n in the product set, or size() if absent.
  std::size_t find(std::uint64_t value) const;
};

/// K_L^(j) = { (M+j-1) 2^L + x : 0 <= x < r_j }, ascending; j is 1-based.
std::vector<std::uint64_t> block_index_set(const ConstructionParams& params, int j, int L);

/// Materializes level L. Throws CapacityError if a product overflows 64 bits or
/// the product set exceeds kMaxProductSetSize.
LevelLattice build_level(const ConstructionParams& params, int L);

/// Levels 1..max_level.
std::vector<LevelLattice> build_levels(const ConstructionParams& params, int max_level);

/// max n <= C 2^{ML} L^M.
bool max_n_bound_check(const LevelLattice& lattice, double C);

/// Smallest C making max_n_bound_check hold for every given level:
/// (max over L of (max n)^{1/M} / (2^L L))^M.
double calibrate_max_n_constant(std::span<const LevelLattice> lattices);

// Structural invariants. Each returns a CheckResult counting violations.

/// Product set strictly ascending within each level and
/// max(level L) < min(level L') for L < L'.
CheckResult check_ordering(std::span<const LevelLattice> lattices);
/// Index sets K_L^(j) pairwise disjoint over all j and L; prime blocks likewise.
CheckResult check_block_disjointness(std::span<const LevelLattice> lattices);
/// Every stored multi-index multiplies back to its n; |Pi_L^x| = r_1...r_M.
CheckResult check_bijection(std::span<const LevelLattice> lattices);
/// For each fixed (i_1..i_{M-1}) and every threshold P, { i_M : n <= P } is an
/// integer interval. Exhaustive over all thresholds that change the set.
CheckResult check_interval_property(std::span<const LevelLattice> lattices);

}  // namespace bohrgap

#endif  // BOHRGAP_PRIME_LATTICE_HPP
