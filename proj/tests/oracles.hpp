#ifndef BOHRGAP_TESTS_ORACLES_HPP
#define BOHRGAP_TESTS_ORACLES_HPP

// Independent reference implementations used by the unit tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// First `count` primes by trial division.
inline std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; out.size() < count; ++n)
    if (is_prime(n)) out.push_back(n);
  return out;
}

/// exp(2 pi i a / b) through long double.
inline cplx root(std::uint64_t a, std::uint64_t b) {
  const long double ang = 2.0L * std::numbers::pi_v<long double> * static_cast<long double>(a % b) / b;
  return {static_cast<double>(std::cos(ang)), static_cast<double>(std::sin(ang))};
}

/// Walsh coefficient straight from the definition, r_{M+1} not involved.
inline cplx coefficient(const std::vector<std::size_t>& r, const std::vector<std::size_t>& idx) {
  cplx c{1.0, 0.0};
  for (std::size_t k = 0; k + 1 < r.size(); ++k) c *= root(idx[k] * idx[k + 1], r[k + 1]);
  return c;
}

/// Sum over every monomial, recursion over blocks.
inline cplx brute_q(const std::vector<std::size_t>& r, const std::vector<std::vector<cplx>>& z) {
  std::vector<std::size_t> idx(r.size(), 0);
  cplx sum{0.0, 0.0};
  while (true) {
    cplx term = coefficient(r, idx);
    for (std::size_t j = 0; j < r.size(); ++j) term *= z[j][idx[j]];
    sum += term;
    std::size_t k = r.size();
    while (k > 0) {
      --k;
      if (++idx[k] < r[k]) break;
      idx[k] = 0;
      if (k == 0) return sum;
    }
  }
}

/// Product set of a level from first principles: (n, multi-index) sorted by n.
struct Product {
  std::uint64_t n;
  std::vector<std::size_t> idx;
};

inline std::vector<Product> product_set(int M, const std::vector<std::size_t>& r, int L,
                                        const std::vector<std::uint64_t>& primes) {
  std::vector<Product> out;
  std::vector<std::size_t> idx(M, 0);
  while (true) {
    std::uint64_t n = 1;
    for (int j = 0; j < M; ++j) {
      const std::uint64_t k = static_cast<std::uint64_t>(M + j) * (std::uint64_t{1} << L) + idx[j];
      n *= primes[k - 1];
    }
    out.push_back({n, idx});
    int k = M - 1;
    while (k >= 0 && ++idx[k] == r[k]) idx[k--] = 0;
    if (k < 0) break;
  }
  std::sort(out.begin(), out.end(), [](const Product& a, const Product& b) { return a.n < b.n; });
  return out;
}

}  // namespace oracle

#endif
