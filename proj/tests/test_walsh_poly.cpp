#include <doctest.h>

#include <random>

#include "bohrgap/errors.hpp"
#include "bohrgap/walsh_poly.hpp"
#include "oracles.hpp"

using namespace bohrgap;

namespace {

TorusPoint fill(const WalshPolynomial& q, cplx v) {
  TorusPoint z;
  for (auto r : q.block_sizes()) z.blocks.emplace_back(r, v);
  return z;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("q_coefficient examples") {
  WalshPolynomial q2({2, 2}, 1);
  const std::uint32_t a[] = {1, 1};
  CHECK(std::abs(q_coefficient(q2, a) - cplx(-1, 0)) < 1e-15);
  WalshPolynomial q4({4, 4}, 2);
  for (std::uint32_t i = 0; i < 4; ++i) {
    const std::uint32_t b[] = {0, i};
    CHECK(q_coefficient(q4, b) == cplx(1, 0));
  }
  WalshPolynomial q3({4, 4, 4}, 2);
  const std::uint32_t c[] = {1, 1, 1};
  CHECK(std::abs(q_coefficient(q3, c) - cplx(-1, 0)) < 1e-15);
}

TEST_CASE("q_coefficient matches the definition for every monomial") {
  WalshPolynomial q({2, 4, 8}, 3);
  std::vector<std::size_t> r{2, 4, 8};
  for (std::uint32_t i = 0; i < 2; ++i)
    for (std::uint32_t j = 0; j < 4; ++j)
      for (std::uint32_t k = 0; k < 8; ++k) {
        const std::uint32_t idx[] = {i, j, k};
        CHECK(std::abs(q_coefficient(q, idx) - oracle::coefficient(r, {i, j, k})) < 1e-14);
      }
}

TEST_CASE("evaluate_direct and evaluate_cascade hand sums") {
  WalshPolynomial q({2, 2}, 1);
  CHECK(std::abs(evaluate_direct(q, q.ones()) - cplx(2, 0)) < 1e-14);
  CHECK(std::abs(evaluate_cascade(q, q.ones()) - cplx(2, 0)) < 1e-14);
  CHECK(std::abs(evaluate_direct(q, fill(q, 0.0))) == 0.0);
  CHECK(std::abs(evaluate_cascade(q, fill(q, 0.0))) == 0.0);
  WalshPolynomial q4({4, 4}, 2);
  CHECK(std::abs(evaluate_direct(q4, q4.ones()) - cplx(4, 0)) < 1e-13);
  CHECK(std::abs(evaluate_direct(q4, q4.ones()) - oracle::brute_q({4, 4}, fill(q4, 1.0).blocks)) < 1e-13);
}

TEST_CASE("dimension mismatches are rejected") {
  WalshPolynomial q({2, 4}, 1);
  TorusPoint z;
  z.blocks = {std::vector<cplx>(2, 1.0), std::vector<cplx>(3, 1.0)};
  CHECK_THROWS_AS(evaluate_direct(q, z), InvalidParameter);
  CHECK_THROWS_AS(evaluate_cascade(q, z), InvalidParameter);
  CHECK_THROWS_AS(WalshPolynomial({4, 2}, 1), InvalidParameter);
  const std::uint32_t bad[] = {2, 0};
  CHECK_THROWS_AS(q_coefficient(q, bad), InvalidParameter);
}

TEST_CASE("cascade agrees with the brute-force oracle and the direct sum") {
  std::mt19937_64 rng(11);
  for (const auto& r : {std::vector<std::size_t>{2, 2}, {2, 4}, {4, 8}, {2, 4, 4}, {4, 4, 8}, {2, 2, 4, 4}}) {
    WalshPolynomial q(r, 0);
    for (int k = 0; k < 100; ++k) {
      const auto z = random_torus_point(q, rng);
      const cplx ref = oracle::brute_q(r, z.blocks);
      CHECK(rel(evaluate_direct(q, z), ref) < 1e-12);
      CHECK(rel(evaluate_cascade(q, z), ref) < 1e-12);
    }
  }
}

TEST_CASE("cascade bound holds inside the polydisc") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& r : {std::vector<std::size_t>{4, 4}, {2, 4, 4}, {8, 8}}) {
    WalshPolynomial q(r, 0);
    const double upper = sup_norm_upper(q);
    for (int k = 0; k < 2000; ++k) {
      auto z = random_torus_point(q, rng);
      for (auto& b : z.blocks)
        for (auto& c : b) c *= u(rng);
      CHECK(std::abs(evaluate_cascade(q, z)) <= upper + 1e-9);
    }
  }
}

TEST_CASE("multilinearity in block 1") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  WalshPolynomial q({4, 8, 8}, 0);
  for (int k = 0; k < 50; ++k) {
    auto z = random_torus_point(q, rng);
    const cplx tau = std::polar(1.0, ang(rng));
    const cplx base = evaluate_cascade(q, z);
    for (auto& c : z.blocks[0]) c *= tau;
    CHECK(rel(evaluate_cascade(q, z), tau * base) < 1e-10);
  }
}

TEST_CASE("block_gradient matches the brute-force partial derivative") {
  std::mt19937_64 rng(9);
  WalshPolynomial q({2, 4, 4}, 0);
  const auto z = random_torus_point(q, rng);
  for (std::size_t j = 0; j < 3; ++j) {
    const auto g = block_gradient(q, z, j);
    for (std::size_t i = 0; i < z.blocks[j].size(); ++i) {
      auto e = z;
      for (auto& c : e.blocks[j]) c = 0.0;
      e.blocks[j][i] = 1.0;
      CHECK(std::abs(g[i] - oracle::brute_q({2, 4, 4}, e.blocks)) < 1e-12);
    }
  }
}

TEST_CASE("walsh_norm_identity_check examples") {
  const cplx one[] = {1.0};
  CHECK(walsh_norm_identity_check(1, 1, one) == doctest::Approx(1.0).epsilon(1e-14));
  const cplx v[] = {1.0, cplx(0, 1)};
  // direct 4x2 product: rows (1 + i w^k) for w = i
  double num = 0;
  for (int k = 0; k < 4; ++k) num += std::norm(1.0 + cplx(0, 1) * oracle::root(k, 4));
  CHECK(num / (4 * 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(walsh_norm_identity_check(2, 4, v) - 1.0) < 1e-12);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<cplx> w(8);
  for (auto& c : w) c = {g(rng), g(rng)};
  CHECK(std::abs(walsh_norm_identity_check(8, 8, w) - 1.0) < 1e-10);
  const cplx zero[] = {0.0, 0.0};
  CHECK_THROWS_AS(walsh_norm_identity_check(2, 2, zero), InvalidParameter);
  CHECK_THROWS_AS(walsh_norm_identity_check(4, 2, w), InvalidParameter);
}

TEST_CASE("norms and certificate by direct arithmetic") {
  const auto p2 = ConstructionParams::parse(2, "1,1");
  CHECK(wiener_norm(WalshPolynomial(p2, 3)) == 64);
  CHECK(wiener_norm(WalshPolynomial(p2, 1)) == 4);
  CHECK(wiener_norm(WalshPolynomial(ConstructionParams::parse(3, "1/2,1,1"), 4)) == 1024);
  CHECK(sup_norm_upper(WalshPolynomial(p2, 3)) == doctest::Approx(std::sqrt(512.0)));
  CHECK(sup_norm_upper(WalshPolynomial(p2, 1)) == doctest::Approx(std::sqrt(8.0)));
  CHECK(sup_norm_upper(WalshPolynomial(ConstructionParams::parse(3, "1,1,1"), 2)) == doctest::Approx(16.0));
  CHECK(bh_certificate(WalshPolynomial(p2, 3)) == doctest::Approx(std::pow(64.0, 0.75)));
  CHECK(bh_certificate(WalshPolynomial(p2, 1)) == doctest::Approx(std::pow(4.0, 0.75)));
  CHECK(bh_certificate(WalshPolynomial(ConstructionParams::parse(3, "1,1,1"), 2)) == doctest::Approx(16.0));
}

TEST_CASE("sup norm search against a phase-grid oracle") {
  WalshPolynomial q({2, 2}, 1);
  // one phase can be fixed by rotation invariance; grid the other three
  constexpr int steps = 64;
  double grid_best = 0;
  for (int a = 0; a < steps; ++a)
    for (int b = 0; b < steps; ++b)
      for (int c = 0; c < steps; ++c) {
        const cplx za = oracle::root(a, steps), zb = oracle::root(b, steps), zc = oracle::root(c, steps);
        grid_best = std::max(grid_best, std::abs(oracle::brute_q({2, 2}, {{1.0, za}, {zb, zc}})));
      }
  const auto w = sup_norm_lower_search(q, 500, 0);
  CHECK(w.value >= 2.0);
  CHECK(w.value <= sup_norm_upper(q) + 1e-9);
  CHECK(w.value >= grid_best - 1e-6);
  CHECK(rel(evaluate_direct(q, w.point), w.q_value) < 1e-9);
  CHECK(std::abs(std::abs(w.q_value) - w.value) < 1e-9 * w.value);
}

TEST_CASE("witness phase normalization") {
  WalshPolynomial q({4, 8}, 0);
  const cplx beta = std::polar(1.0, 0.7);
  const auto w = sup_norm_lower_search(q, 300, 4, beta);
  CHECK(std::abs(std::abs(w.tau) - 1.0) < 1e-12);
  const cplx yq = evaluate_cascade(q, w.normalized_point);
  CHECK(rel(yq, w.tau * w.q_value) < 1e-9);
  CHECK(std::abs(beta * yq - w.value) < 1e-9 * w.value);
  CHECK(w.point.max_modulus_defect() < 1e-12);
}

TEST_CASE("search history is nondecreasing and bounded") {
  for (const auto& r : {std::vector<std::size_t>{4, 4}, {2, 4, 4}, {8, 8, 8}}) {
    WalshPolynomial q(r, 0);
    const auto w = sup_norm_lower_search(q, 400, 2);
    REQUIRE_FALSE(w.history.empty());
    for (std::size_t i = 1; i < w.history.size(); ++i) CHECK(w.history[i] >= w.history[i - 1]);
    CHECK(w.history.back() == doctest::Approx(w.value));
    CHECK(w.value <= sup_norm_upper(q) + 1e-9);
  }
}

TEST_CASE("phase ascent never decreases") {
  std::mt19937_64 rng(8);
  WalshPolynomial q({4, 8, 8}, 0);
  auto z = random_torus_point(q, rng);
  const auto hist = phase_ascent(q, z, 50);
  for (std::size_t i = 1; i < hist.size(); ++i) CHECK(hist[i] >= hist[i - 1] - 1e-12);
  CHECK(std::abs(std::abs(evaluate_cascade(q, z)) - hist.back()) < 1e-9);
}

TEST_CASE("box-constrained ascent stays inside the box and improves Re(beta Q)") {
  std::mt19937_64 rng(21);
  WalshPolynomial q({4, 4}, 0);
  const auto centre = random_torus_point(q, rng);
  const double half = 0.2;
  const auto z = constrained_ascent(q, centre, half, 1.0, 100);
  CHECK(evaluate_cascade(q, z).real() >= evaluate_cascade(q, centre).real() - 1e-12);
  for (std::size_t j = 0; j < z.blocks.size(); ++j)
    for (std::size_t i = 0; i < z.blocks[j].size(); ++i) {
      CHECK(std::abs(std::arg(z.blocks[j][i] / centre.blocks[j][i])) <= half + 1e-12);
      CHECK(std::abs(std::abs(z.blocks[j][i]) - 1.0) < 1e-12);
    }
}

TEST_CASE("searched value clears half the certificate for all-ones rho") {
  for (int M : {2, 3}) {
    const auto params = ConstructionParams::parse(M, M == 2 ? "1,1" : "1,1,1");
    for (int L = 1; L <= (M == 2 ? 5 : 3); ++L) {
      WalshPolynomial q(params, L);
      const auto w = sup_norm_lower_search(q, 200, 1);
      CHECK(w.value >= 0.5 * bh_certificate(q));
    }
  }
}
