#include <doctest.h>

#include <map>

#include <set>
#include <thread>

#include "bohrgap/errors.hpp"
#include "bohrgap/prime_lattice.hpp"
#include "oracles.hpp"

using namespace bohrgap;

namespace {

const std::vector<std::uint64_t>& oracle_primes() {
  static const auto p = oracle::first_primes(20000);
  return p;
}

ConstructionParams p2() { return ConstructionParams::parse(2, "1,1"); }

}  // namespace

TEST_CASE("prime_at is 1-based and matches trial division") {
  CHECK(prime_at(1) == 2);
  CHECK(prime_at(8) == 19);
  CHECK(prime_at(100) == 541);
  const auto& ref = oracle_primes();
  for (std::size_t k = 1; k <= ref.size(); k += 37) CHECK(prime_at(k) == ref[k - 1]);
  CHECK(prime_at(ref.size()) == ref.back());
}

TEST_CASE("prime_at rejects index 0 and indices past the table ceiling") {
  CHECK_THROWS_AS(prime_at(0), InvalidParameter);
  CHECK_THROWS_AS(prime_at(kMaxPrimeIndex + 1), CapacityError);
}

TEST_CASE("prime_at is safe under concurrent growth") {
  std::vector<std::thread> pool;
  std::vector<std::uint64_t> got(8);
  for (int w = 0; w < 8; ++w) pool.emplace_back([&, w] { got[w] = prime_at(50000 + 1000 * w); });
  for (auto& t : pool) t.join();
  for (int w = 0; w < 8; ++w) {
    CHECK(oracle::is_prime(got[w]));
    if (w) CHECK(got[w] > got[w - 1]);
  }
}

TEST_CASE("primes_up_to agrees with trial division") {
  const auto ps = primes_up_to(10000);
  std::vector<std::uint64_t> ref;
  for (std::uint64_t n = 0; n <= 10000; ++n)
    if (oracle::is_prime(n)) ref.push_back(n);
  CHECK(ps == ref);
  CHECK(primes_up_to(1).empty());
  CHECK(primes_up_to(2) == std::vector<std::uint64_t>{2});
}

TEST_CASE("block_index_set by direct substitution") {
  CHECK(block_index_set(p2(), 1, 2) == std::vector<std::uint64_t>{8, 9, 10, 11});
  CHECK(block_index_set(p2(), 2, 2) == std::vector<std::uint64_t>{12, 13, 14, 15});
  const auto p3 = ConstructionParams::parse(3, "1/2,1,1");
  CHECK(block_index_set(p3, 1, 4) == std::vector<std::uint64_t>{48, 49, 50, 51});
  CHECK_THROWS_AS(block_index_set(p2(), 0, 1), InvalidParameter);
  CHECK_THROWS_AS(block_index_set(p2(), 3, 1), InvalidParameter);
}

TEST_CASE("level 1 of M=2 by hand") {
  const auto lat = build_level(p2(), 1);
  CHECK(lat.index_sets[0] == std::vector<std::uint64_t>{4, 5});
  CHECK(lat.index_sets[1] == std::vector<std::uint64_t>{6, 7});
  CHECK(lat.prime_blocks[0] == std::vector<std::uint64_t>{7, 11});
  CHECK(lat.prime_blocks[1] == std::vector<std::uint64_t>{13, 17});
  CHECK(lat.n == std::vector<std::uint64_t>{91, 119, 143, 187});
  CHECK(lat.min_n() == 91);
  CHECK(lat.find(143) == 2);
  CHECK(lat.find(144) == lat.size());
  auto idx = lat.index(1);
  CHECK(idx[0] == 0);
  CHECK(idx[1] == 1);
}

TEST_CASE("build_level matches the brute-force product set oracle") {
  for (const auto& [M, rho, maxL] : {std::tuple{2, "1,1", 6}, std::tuple{3, "1/2,1,1", 5},
                                     std::tuple{3, "3/4,1,1", 4}, std::tuple{2, "0,1", 6}}) {
    const auto params = ConstructionParams::parse(M, rho);
    for (int L = 1; L <= maxL; ++L) {
      const auto lat = build_level(params, L);
      const auto ref = oracle::product_set(M, lat.r, L, oracle_primes());
      REQUIRE(lat.size() == ref.size());
      for (std::size_t pos = 0; pos < ref.size(); ++pos) {
        CHECK(lat.n[pos] == ref[pos].n);
        auto idx = lat.index(pos);
        for (int j = 0; j < M; ++j) CHECK(idx[j] == ref[pos].idx[j]);
      }
    }
  }
}

TEST_CASE("max_n_bound_check examples and calibration") {
  const auto lat = build_level(p2(), 1);
  CHECK(max_n_bound_check(lat, 64.0));
  CHECK_FALSE(max_n_bound_check(lat, 1.0));
  const auto levels = build_levels(p2(), 6);
  const double C = calibrate_max_n_constant(levels);
  for (const auto& l : levels) CHECK(max_n_bound_check(l, C));
  CHECK_FALSE(max_n_bound_check(levels.front(), C * 0.999));
  CHECK(max_n_bound_check(levels.back(), C));
}

TEST_CASE("structural invariants hold exhaustively") {
  for (const auto& [M, rho, maxL] : {std::tuple{2, "1,1", 10}, std::tuple{3, "1/2,1,1", 8}}) {
    const auto levels = build_levels(ConstructionParams::parse(M, rho), maxL);
    CHECK(check_ordering(levels).passed);
    CHECK(check_block_disjointness(levels).passed);
    CHECK(check_bijection(levels).passed);
  }
  for (const auto& [M, rho, maxL] : {std::tuple{2, "1,1", 6}, std::tuple{3, "1,1,1", 4}}) {
    const auto levels = build_levels(ConstructionParams::parse(M, rho), maxL);
    CHECK(check_interval_property(levels).passed);
  }
}

TEST_CASE("interval property by brute force on small levels") {
  const auto params = ConstructionParams::parse(3, "1/2,1,1");
  for (int L = 1; L <= 4; ++L) {
    const auto lat = build_level(params, L);
    // every threshold equal to some n: for each prefix the admitted i_M form 0..k-1
    for (std::size_t t = 0; t < lat.size(); t += 3) {
      const std::uint64_t P = lat.n[t];
      std::map<std::pair<std::uint32_t, std::uint32_t>, std::set<std::uint32_t>> admitted;
      for (std::size_t pos = 0; pos < lat.size(); ++pos) {
        if (lat.n[pos] > P) continue;
        auto idx = lat.index(pos);
        admitted[{idx[0], idx[1]}].insert(idx[2]);
      }
      for (const auto& [prefix, s] : admitted) CHECK(*s.rbegin() - *s.begin() + 1 == s.size());
    }
  }
}

TEST_CASE("fault injection: an out-of-order level trips only the ordering check") {
  auto levels = build_levels(p2(), 3);
  auto& lat = levels[1];
  std::swap(lat.n[3], lat.n[4]);
  for (int j = 0; j < 2; ++j) std::swap(lat.flat_index[3 * 2 + j], lat.flat_index[4 * 2 + j]);
  CHECK_FALSE(check_ordering(levels).passed);
  CHECK(check_block_disjointness(levels).passed);
  CHECK(check_bijection(levels).passed);
  CHECK(check_interval_property(levels).passed);
}

TEST_CASE("a wrong multi-index is a bijection violation") {
  auto levels = build_levels(p2(), 2);
  levels[1].flat_index[0] = 1;
  const auto res = check_bijection(levels);
  CHECK_FALSE(res.passed);
  CHECK(res.violations >= 1);
}

TEST_CASE("overlong levels are refused") {
  CHECK_THROWS_AS(build_level(ConstructionParams::parse(3, "1,1,1"), 9), CapacityError);
}
