#ifndef BOHRGAP_PARAMS_HPP
#define BOHRGAP_PARAMS_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bohrgap/rational.hpp"

namespace bohrgap {

/// Parameters of one member of the Dirichlet series family.
///
/// `rho` holds the M block exponents (nondecreasing, in [0,1], last one exactly 1).
/// When the exponents were given as fractions the exact values are kept in
/// `rho_exact` and every derived quantity that can be computed exactly is.
struct ConstructionParams {
  int M = 2;
  std::vector<double> rho{1.0, 1.0};
  std::optional<std::vector<Rational>> rho_exact;
  double X = 1.5;
  bool x_is_default = true;
  int max_level = 6;

  static ConstructionParams make(int M, std::vector<Rational> rho, std::optional<double> X = {},
                                 int max_level = 6);
  static ConstructionParams make(int M, std::vector<double> rho, std::optional<double> X = {},
                                 int max_level = 6);
  /// `rho_list` is a comma list such as "1,1" or "3/4,1,1".
  static ConstructionParams parse(int M, std::string_view rho_list, std::optional<double> X = {},
                                  int max_level = 6);

  /// Throws InvalidParameter when an invariant is broken.
  void validate() const;

  double rho_sum() const;
  /// rho_1 + ... + rho_{M-2} + rho_M, the exponent of the prefix-sum estimate.
  double key_exponent() const;
  /// (rho_1 + ... + rho_M)(M+1)/(2M).
  double default_x() const;

  std::optional<Rational> rho_sum_exact() const;
  std::optional<Rational> key_exponent_exact() const;
  std::optional<Rational> default_x_exact() const;

  /// r_j = floor(2^{rho_j L}); j is 1-based.
  std::size_t block_size(int j, int L) const;
  std::vector<std::size_t> block_sizes(int L) const;

  std::string rho_string() const;
};

}  // namespace bohrgap

#endif  // BOHRGAP_PARAMS_HPP
