// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bohrgap/errors.hpp"
#include "bohrgap/experiments.hpp"
#include "bohrgap/kronecker_search.hpp"
#include "bohrgap/prime_lattice.hpp"
#include "bohrgap/series_core.hpp"
#include "bohrgap/walsh_poly.hpp"

using namespace bohrgap;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;
};

using Clock = std::chrono::steady_clock;

ConstructionParams ones(int M) {
  std::string rho = "1";
  for (int j = 1; j < M; ++j) rho += ",1";
  return ConstructionParams::parse(M, rho);
}

double relative_gap(cplx a, cplx b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

void norm_identities(Outcome& o) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const std::pair<std::size_t, std::size_t> sizes[] = {{2, 2}, {2, 4}, {4, 8}, {8, 8}};
  double worst = 0;
  for (auto [r1, r2] : sizes) {
    WalshPolynomial q({r1, r2});
    if (wiener_norm(q) != r1 * r2) o.passed = false;
    for (int k = 0; k < 100; ++k) {
      std::vector<cplx> v(r1);
      for (auto& x : v) x = {g(rng), g(rng)};
      worst = std::max(worst, std::abs(walsh_norm_identity_check(r1, r2, v) - 1.0));
    }
  }
  if (worst > 1e-10) o.passed = false;
  o.detail << "max |ratio - 1| = " << worst;
}

void sup_sandwich(Outcome& o) {
  const ConstructionParams configs[] = {ones(2), ones(3), ConstructionParams::parse(3, "3/4,1,1")};
  double min_cert_ratio = std::numeric_limits<double>::infinity();
  for (const auto& p : configs)
    for (int L = 1; L <= 5; ++L) {
      WalshPolynomial q(p, L);
      const auto w = sup_norm_lower_search(q, q.monomial_count() > 4096 ? 60 : 300, 7 + L);
      const double upper = sup_norm_upper(q);
      if (w.value > upper + 1e-9) o.passed = false;
      const bool all_ones = std::all_of(p.rho.begin(), p.rho.end(), [](double r) { return r == 1.0; });
      if (all_ones) {
        const double ratio = w.value / bh_certificate(q);
        min_cert_ratio = std::min(min_cert_ratio, ratio);
        if (ratio < 0.5) o.passed = false;
      }
    }
  o.detail << "min searched/certificate (rho = 1) = " << min_cert_ratio;
}

void cascade(Outcome& o) {
  std::mt19937_64 rng(3);
  double worst = 0;
  for (const auto& p : {ones(2), ones(3)})
    for (int L = 1; L <= 5; ++L) {
      WalshPolynomial q(p, L);
      for (int k = 0; k < 100; ++k) {
        const auto z = random_torus_point(q, rng);
        worst = std::max(worst, relative_gap(evaluate_direct(q, z), evaluate_cascade(q, z)));
      }
    }
  if (worst > 1e-9) o.passed = false;
  o.detail << "max relative gap = " << worst;
}

void key_estimate(Outcome& o) {
  for (auto [p, Lmax] : {std::pair{ones(2), 6}, std::pair{ones(3), 4}}) {
    const auto lats = build_levels(p, Lmax);
    if (!check_interval_property(lats).passed) o.passed = false;
    std::vector<double> ratios;
    for (const auto& lat : lats) ratios.push_back(key_estimate_scan(lat).max_abs / key_estimate_scale(p, lat.level));
    const double C = *std::max_element(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    if (!(ratios[n - 1] <= ratios[n - 2] && ratios[n - 2] <= ratios[n - 3])) o.passed = false;
    o.detail << "M=" << p.M << " C=" << C << " last=" << ratios.back() << "; ";
  }
}

void section_arithmetic(Outcome& o) {
  const auto a = abscissa_bounds(ones(2));
  if (!(a.exact->sigma_b_upper == Rational(0) && a.exact->sigma_a_lower == Rational(1, 4) &&
        a.exact->sigma_c_upper == Rational(-1, 4)))
    o.passed = false;
  const auto b = abscissa_bounds(ConstructionParams::parse(3, "3/4,1,1"));
  const Rational g1 = b.exact->sigma_a_lower - b.exact->sigma_b_upper;
  const Rational g2 = b.exact->sigma_b_lower - b.exact->sigma_c_upper;
  if (!(g1 == Rational(7, 24) && g2 == Rational(1, 36))) o.passed = false;
  o.detail << "M=2: (" << a.exact->sigma_b_upper.to_string() << ", " << a.exact->sigma_a_lower.to_string() << ", "
           << a.exact->sigma_c_upper.to_string() << "); M=3 gaps (" << g1.to_string() << ", " << g2.to_string() << ")";
}

void convergence(Outcome& o) {
  const auto rep = run_convergence_experiment(ones(2), 8, 0.25);
  o.passed = rep.passed;
  o.detail << "terms";
  for (const auto& row : rep.rows) o.detail << ' ' << row.term;
  o.detail << "; decreasing_from=" << (rep.decreasing_from ? std::to_string(*rep.decreasing_from) : "none")
           << " oscillation=" << rep.oscillation_last3 << " limit=" << 2 * rep.rows.back().term;
}

void unboundedness(Outcome& o) {
  for (int L_K : {1, 2}) {
    DemonstrationOptions opt;
    opt.t_max = 1e6;
    for (int L = 1; L <= L_K; ++L) opt.deltas[L] = 0.2;
    DemonstrationReport rep;
    try {
      rep = demonstrate_levels(ones(2), L_K, opt);
    } catch (const SearchExhausted& e) {
      o.passed = false;
      o.detail << "L_K=" << L_K << " exhausted at t_max=" << opt.t_max << "; ";
      continue;
    }
    DirichletSeries f(ones(2), L_K);
    const auto tr = partial_sum_trace(f, {0.0, rep.t_K}, std::numeric_limits<std::size_t>::max());
    const double gap = relative_gap(tr.checkpoints.back().value, rep.partial_sum);
    if (!rep.achieved || std::abs(rep.partial_sum) < rep.bound || gap > 1e-9 || tr.checkpoints.back().N != rep.N_K)
      o.passed = false;
    o.detail << "L_K=" << L_K << " t=" << rep.t_K << " |S|=" << std::abs(rep.partial_sum) << " bound=" << rep.bound
             << " trace gap=" << gap << " t_max=" << opt.t_max << "; ";
  }
}

void decomposition(Outcome& o) {
  const auto p = ones(2);
  const auto lats = build_levels(p, 6);
  const double eps = epsilon_for_convergence(p);
  DirichletSeries series(p, lats, choose_signs(p, lats, eps));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> re(-eps, 2.0), im(-100.0, 100.0);
  double worst = 0;
  for (int k = 0; k < 5; ++k) {
    const cplx s{re(rng), im(rng)};
    const auto trace = partial_sum_trace(series, s, std::numeric_limits<std::size_t>::max());
    for (int L = 1; L <= 6; ++L)
      worst = std::max(worst, relative_gap(*trace.boundary_value(L), level_decomposition(series, s, L)));
  }
  if (worst > 1e-9) o.passed = false;
  o.detail << "max relative gap = " << worst;
}

void structure(Outcome& o) {
  const std::pair<ConstructionParams, int> configs[] = {
      {ones(2), 10}, {ConstructionParams::parse(3, "1/2,1/2,1"), 10}, {ones(3), 6}};
  std::size_t total = 0;
  for (const auto& [p, Lmax] : configs) {
    const auto lats = build_levels(p, Lmax);
    for (const auto& c : {check_ordering(lats), check_block_disjointness(lats), check_bijection(lats)}) {
      total += c.violations;
      if (!c.passed) o.passed = false;
    }
  }
  o.detail << "M=2 L<=10, M=3 (1/2,1/2,1) L<=10, M=3 (1,1,1) L<=6: " << total << " violations";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"norm identities", norm_identities},
      {"sup-norm sandwich", sup_sandwich},
      {"cascade equivalence", cascade},
      {"prefix-sum estimate", key_estimate},
      {"exact abscissa arithmetic", section_arithmetic},
      {"convergence at -eps", convergence},
      {"large partial sums", unboundedness},
      {"level decomposition", decomposition},
      {"lattice structure", structure},
  };
  int failures = 0;
  int k = 0;
  for (const auto& [name, fn] : criteria) {
    ++k;
    Outcome o;
    const auto t0 = Clock::now();
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "error: " << e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (!o.passed) ++failures;
    std::printf("%s %d %s (%.2fs): %s\n", o.passed ? "PASS" : "FAIL", k, name, secs, o.detail.str().c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
