#include "bohrgap/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "bohrgap/errors.hpp"
#include "bohrgap/walsh_poly.hpp"

namespace bohrgap {

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den == 0 ? 0.0 : (n * sxy - sx * sy) / den;
}

double relative_gap(cplx a, cplx b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

CheckResult check_cascade(std::span<const LevelLattice> lattices, std::mt19937_64& rng) {
  CheckResult res{"cascade_agreement", true, 0, {}};
  double worst = 0;
  for (const auto& lat : lattices) {
    WalshPolynomial poly(lat.r, lat.level);
    const int points = poly.monomial_count() > (1u << 18) ? 3 : 20;
    for (int k = 0; k < points; ++k) {
      const TorusPoint z = random_torus_point(poly, rng);
      const double gap = relative_gap(evaluate_cascade(poly, z), evaluate_direct(poly, z));
      worst = std::max(worst, gap);
      if (gap > 1e-9) ++res.violations;
    }
  }
  res.passed = res.violations == 0;
  res.detail = "max relative gap " + fmt(worst);
  return res;
}

CheckResult check_norm_identity(std::span<const LevelLattice> lattices, std::mt19937_64& rng) {
  CheckResult res{"walsh_norm_identity", true, 0, {}};
  std::normal_distribution<double> g;
  double worst = 0;
  for (const auto& lat : lattices) {
    for (std::size_t k = 0; k + 1 <= lat.r.size(); ++k) {
      const std::size_t r1 = lat.r[k];
      const std::size_t r2 = k + 1 < lat.r.size() ? lat.r[k + 1] : lat.r.back();
      if (r1 > r2) continue;
      for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> v(r1);
        for (auto& x : v) x = {g(rng), g(rng)};
        const double dev = std::abs(walsh_norm_identity_check(r1, r2, v) - 1.0);
        worst = std::max(worst, dev);
        if (dev > 1e-10) ++res.violations;
      }
    }
  }
  res.passed = res.violations == 0;
  res.detail = "max deviation from 1: " + fmt(worst);
  return res;
}

CheckResult check_wiener(std::span<const LevelLattice> lattices) {
  CheckResult res{"wiener_norm", true, 0, {}};
  for (const auto& lat : lattices) {
    WalshPolynomial poly(lat.r, lat.level);
    std::uint64_t product = 1;
    for (auto r : lat.r) product *= r;
    double abs_sum = 0;
    for (const auto& ph : level_phases(lat)) abs_sum += std::abs(ph);
    if (wiener_norm(poly) != product || std::llround(abs_sum) != static_cast<long long>(product) ||
        lat.size() != product) {
      ++res.violations;
    }
  }
  res.passed = res.violations == 0;
  return res;
}

CheckResult check_sup_sandwich(std::span<const LevelLattice> lattices, std::uint64_t seed) {
  CheckResult res{"sup_norm_sandwich", true, 0, {}};
  std::ostringstream detail;
  for (const auto& lat : lattices) {
    WalshPolynomial poly(lat.r, lat.level);
    if (poly.monomial_count() > (1u << 16)) continue;
    const auto w = sup_norm_lower_search(poly, 200, seed + static_cast<std::uint64_t>(lat.level));
    const double upper = sup_norm_upper(poly);
    if (w.value > upper + 1e-9) ++res.violations;
    detail << "L=" << lat.level << " lower=" << fmt(w.value) << " upper=" << fmt(upper) << "; ";
  }
  res.passed = res.violations == 0;
  res.detail = detail.str();
  return res;
}

CheckResult check_boundedness(std::span<const LevelLattice> lattices, std::mt19937_64& rng) {
  CheckResult res{"boundedness_sampling", true, 0, {}};
  std::uniform_real_distribution<double> ut(0.0, 1e4);
  double worst = 0;
  for (const double sigma : {0.5, 1.0}) {
    for (const auto& lat : lattices) {
      WalshPolynomial poly(lat.r, lat.level);
      const double bound =
          std::pow(static_cast<double>(lat.min_n()), -sigma) * sup_norm_upper(poly) * (1.0 + 1e-12);
      for (int k = 0; k < 10; ++k) {
        const double v = std::abs(evaluate_cascade(poly, dirichlet_point(lat, {sigma, ut(rng)})));
        worst = std::max(worst, v / bound);
        if (v > bound) ++res.violations;
      }
    }
  }
  res.passed = res.violations == 0;
  res.detail = "max value/bound " + fmt(worst);
  return res;
}

CheckResult check_key_estimate(const ConstructionParams& params, std::span<const LevelLattice> lattices) {
  CheckResult res{"key_estimate", true, 0, {}};
  std::vector<double> ratios;
  std::ostringstream detail;
  for (const auto& lat : lattices) {
    if (lat.size() > (std::size_t{1} << 22)) break;
    const auto scan = key_estimate_scan(lat);
    ratios.push_back(scan.max_abs / key_estimate_scale(params, lat.level));
    detail << "L=" << lat.level << " ratio=" << fmt(ratios.back()) << "; ";
  }
  const double C = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
  detail << "calibrated C'=" << fmt(C);
  const std::size_t n = ratios.size();
  if (n >= 3) {
    if (ratios[n - 1] > ratios[n - 2] * (1 + 1e-12)) ++res.violations;
    if (ratios[n - 2] > ratios[n - 3] * (1 + 1e-12)) ++res.violations;
  }
  res.passed = res.violations == 0;
  res.detail = detail.str();
  return res;
}

CheckResult check_summation_by_parts(std::mt19937_64& rng) {
  CheckResult res{"summation_by_parts", true, 0, {}};
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> len(1, 10000);
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t p = len(rng);
    std::vector<double> a(p);
    std::vector<cplx> b(p);
    double scale = 0;
    for (std::size_t i = 0; i < p; ++i) {
      a[i] = u(rng);
      b[i] = {u(rng), u(rng)};
      scale += std::abs(a[i] * b[i]);
    }
    const double rel = summation_by_parts_check(a, b) / scale;
    worst = std::max(worst, rel);
    if (rel > 1e-10) ++res.violations;
  }
  res.passed = res.violations == 0;
  res.detail = "max relative error " + fmt(worst);
  return res;
}

CheckResult check_decomposition(const ConstructionParams& params, std::span<const LevelLattice> lattices,
                                std::mt19937_64& rng) {
  CheckResult res{"decomposition_identity", true, 0, {}};
  if (lattices.empty()) return res;
  double eps = 0;
  try {
    eps = epsilon_for_convergence(params);
  } catch (const NonPositiveEpsilon&) {
  }
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  SignAssignment signs;
  for (const auto& lat : lattices) signs.betas[lat.level] = std::polar(1.0, phase(rng));
  DirichletSeries series(params, {lattices.begin(), lattices.end()}, signs);
  std::uniform_real_distribution<double> re(-eps, 2.0), im(-50.0, 50.0);
  double worst = 0;
  for (int k = 0; k < 3; ++k) {
    const cplx s{re(rng), im(rng)};
    const auto trace = partial_sum_trace(series, s, std::numeric_limits<std::size_t>::max());
    for (const auto& lat : lattices) {
      const double gap = relative_gap(*trace.boundary_value(lat.level), level_decomposition(series, s, lat.level));
      worst = std::max(worst, gap);
      if (gap > 1e-9) ++res.violations;
    }
  }
  res.passed = res.violations == 0;
  res.detail = "max relative gap " + fmt(worst);
  return res;
}

CheckResult check_epsilon_identity(const ConstructionParams& params) {
  CheckResult res{"epsilon_identity", true, 0, {}};
  try {
    const double eps = epsilon_for_convergence(params);
    const double lhs = params.key_exponent() - params.X + eps * params.M;
    if (std::abs(lhs) > 1e-12) ++res.violations;
    res.detail = "eps=" + fmt(eps) + " residual " + fmt(lhs);
    if (auto exact = epsilon_exact(params)) res.detail += " exact eps=" + exact->to_string();
  } catch (const NonPositiveEpsilon& e) {
    res.detail = "eps=" + fmt(e.epsilon()) + " not positive; convergence regime does not apply";
  }
  res.passed = res.violations == 0;
  return res;
}

CheckResult check_max_n(std::span<const LevelLattice> lattices) {
  CheckResult res{"max_n_bound", true, 0, {}};
  const double C = calibrate_max_n_constant(lattices);
  for (const auto& lat : lattices)
    if (!max_n_bound_check(lat, C)) ++res.violations;
  res.passed = res.violations == 0;
  res.detail = "calibrated C_M=" + fmt(C);
  return res;
}

}  // namespace

AbscissaBounds abscissa_bounds(const ConstructionParams& params) {
  params.validate();
  if (!params.x_is_default) {
    throw InvalidParameter("abscissa bounds hold for X = (rho_1+...+rho_M)(M+1)/(2M); drop the X override");
  }
  const int M = params.M;
  AbscissaBounds b;
  if (params.rho_exact) {
    const auto& r = *params.rho_exact;
    const Rational m(M);
    const Rational sum = *params.rho_sum_exact();
    const Rational key = *params.key_exponent_exact();
    ExactAbscissaBounds e;
    e.sigma_b_upper = (Rational(1) - sum / m) / (Rational(2) * m);
    e.sigma_b_lower = Rational(0);
    e.sigma_a_lower = Rational(M - 1) * sum / (Rational(2) * m * m);
    e.sigma_c_upper = (Rational(M - 1) * key - Rational(M + 1) * r[M - 2]) / (Rational(2) * m * m);
    e.valid = e.sigma_c_upper < Rational(0);
    b.sigma_b_upper = e.sigma_b_upper.to_double();
    b.sigma_b_lower = 0.0;
    b.sigma_a_lower = e.sigma_a_lower.to_double();
    b.sigma_c_upper = e.sigma_c_upper.to_double();
    b.valid = e.valid;
    b.exact = e;
    return b;
  }
  const double sum = params.rho_sum();
  const double key = params.key_exponent();
  b.sigma_b_upper = (1.0 - sum / M) / (2.0 * M);
  b.sigma_b_lower = 0.0;
  b.sigma_a_lower = (M - 1) * sum / (2.0 * M * M);
  b.sigma_c_upper = ((M - 1) * key - (M + 1) * params.rho[M - 2]) / (2.0 * M * M);
  b.valid = b.sigma_c_upper < 0;
  return b;
}

BoundednessReport run_boundedness_experiment(const ConstructionParams& params, double sigma, int Lmax,
                                             std::size_t t_samples, std::uint64_t seed, double t_range) {
  params.validate();
  if (!(sigma > 0)) throw InvalidParameter("boundedness experiment needs sigma > 0");
  if (Lmax < 1) throw InvalidParameter("Lmax must be >= 1");
  if (t_samples == 0) throw InvalidParameter("need at least one t sample");
  BoundednessReport rep;
  rep.params = params;
  rep.sigma = sigma;
  rep.t_samples = t_samples;
  rep.t_range = t_range;
  rep.seed = seed;
  rep.predicted_rate = 0.5 * (params.rho_sum() + 1.0) - sigma * params.M - params.X;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, t_range);
  std::vector<double> ts(t_samples);
  for (auto& t : ts) t = ut(rng);

  std::vector<double> xs, ys;
  rep.passed = true;
  for (int L = 1; L <= Lmax; ++L) {
    const LevelLattice lat = build_level(params, L);
    WalshPolynomial poly(lat.r, L);
    const double weight = std::exp2(-params.X * L);
    BoundednessRow row;
    row.L = L;
    row.min_n = lat.min_n();
    row.bound = weight * std::pow(static_cast<double>(lat.min_n()), -sigma) * sup_norm_upper(poly);
    for (double t : ts) {
      row.max_abs = std::max(row.max_abs, weight * std::abs(evaluate_cascade(poly, dirichlet_point(lat, {sigma, t}))));
    }
    row.within_bound = row.max_abs <= row.bound * (1.0 + 1e-12);
    rep.passed = rep.passed && row.within_bound;
    if (row.max_abs > 0) {
      xs.push_back(L);
      ys.push_back(std::log2(row.max_abs));
    }
    rep.rows.push_back(row);
  }
  rep.fitted_rate = fit_slope(xs, ys);
  return rep;
}

DivergenceReport run_divergence_experiment(const ConstructionParams& params, double sigma, int Lmax) {
  params.validate();
  if (Lmax < 1) throw InvalidParameter("Lmax must be >= 1");
  DivergenceReport rep;
  rep.params = params;
  rep.sigma = sigma;
  rep.sigma_a_lower = (params.rho_sum() - params.X) / params.M;
  rep.exponent = params.rho_sum() - sigma * params.M - params.X;
  rep.below_sigma_a = sigma < rep.sigma_a_lower;

  double cumulative = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (int L = 1; L <= Lmax; ++L) {
    const LevelLattice lat = build_level(params, L);
    long double sum = 0;
    for (auto n : lat.n) sum += std::exp(-static_cast<long double>(sigma) * std::log(static_cast<long double>(n)));
    DivergenceRow row;
    row.L = L;
    row.level_sum = static_cast<double>(sum) * std::exp2(-params.X * L);
    cumulative += row.level_sum;
    row.cumulative = cumulative;
    row.reference = std::exp2(rep.exponent * L) * std::pow(static_cast<double>(L), -sigma * params.M);
    row.ratio = row.level_sum / row.reference;
    lo = std::min(lo, row.ratio);
    hi = std::max(hi, row.ratio);
    rep.rows.push_back(row);
  }
  rep.calibrated_constant = lo;
  rep.ratio_spread = hi / lo;
  const std::size_t n = rep.rows.size();
  bool growing = n >= 3, shrinking = n >= 3;
  for (std::size_t i = n >= 3 ? n - 2 : n; i < n; ++i) {
    growing = growing && rep.rows[i].level_sum > rep.rows[i - 1].level_sum;
    shrinking = shrinking && rep.rows[i].level_sum < rep.rows[i - 1].level_sum;
  }
  rep.growing_tail = growing;
  rep.passed = lo > 0 && rep.ratio_spread <= 4.0 && (rep.below_sigma_a ? growing : shrinking);
  return rep;
}

ConvergenceReport run_convergence_experiment(const ConstructionParams& params, int Lmax,
                                             std::optional<double> epsilon, std::size_t checkpoint_every) {
  const double eps_params = epsilon_for_convergence(params);
  if (Lmax < 1) throw InvalidParameter("Lmax must be >= 1");
  ConvergenceReport rep;
  rep.params = params;
  rep.epsilon = epsilon ? *epsilon : eps_params;
  rep.epsilon_from_params = !epsilon.has_value();

  auto lattices = build_levels(params, Lmax);
  SignAssignment signs = choose_signs(params, lattices, rep.epsilon);
  DirichletSeries series(params, std::move(lattices), signs);
  rep.trace = partial_sum_trace(series, {-rep.epsilon, 0.0}, checkpoint_every);

  cplx previous{0.0, 0.0};
  double omega_sum = 0;
  for (int L = 1; L <= Lmax; ++L) {
    ConvergenceRow row;
    row.L = L;
    row.omega_abs = signs.omega_abs.at(L);
    row.term = std::exp2(-params.X * L) * row.omega_abs;
    row.d = signs.dees.at(L);
    row.greedy_sum = signs.running_sum.at(L);
    row.boundary_value = *rep.trace.boundary_value(L);
    for (const auto& cp : rep.trace.checkpoints)
      if (cp.level == L) row.tail_max = std::max(row.tail_max, std::abs(cp.value - previous));
    previous = row.boundary_value;
    omega_sum += row.d == 0 ? row.term : -row.term;
    rep.max_decomposition_error = std::max(rep.max_decomposition_error, relative_gap(row.boundary_value, omega_sum));
    rep.rows.push_back(row);
  }

  const auto n = static_cast<int>(rep.rows.size());
  int from = n;
  while (from > 1 && rep.rows[from - 2].term > rep.rows[from - 1].term) --from;
  if (from < n) rep.decreasing_from = from;

  std::vector<double> xs, ys;
  for (int i = std::max(0, n - 3); i < n; ++i) {
    xs.push_back(rep.rows[i].L);
    ys.push_back(std::log2(rep.rows[i].term));
  }
  rep.decay_exponent = fit_slope(xs, ys);
  for (int i = std::max(0, n - 3); i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      rep.oscillation_last3 =
          std::max(rep.oscillation_last3, std::abs(rep.rows[i].boundary_value - rep.rows[j].boundary_value));

  rep.terms_decay = rep.decreasing_from.has_value() && *rep.decreasing_from <= 4;
  rep.oscillation_ok = rep.oscillation_last3 <= 2.0 * rep.rows.back().term;
  rep.passed = rep.terms_decay && rep.oscillation_ok && rep.max_decomposition_error <= 1e-9;
  return rep;
}

bool VerificationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerificationReport run_full_verification(const ConstructionParams& params, int Lmax, std::uint64_t seed) {
  params.validate();
  if (Lmax < 1) throw InvalidParameter("Lmax must be >= 1");
  const auto lattices = build_levels(params, Lmax);
  return run_full_verification(params, lattices, seed);
}

VerificationReport run_full_verification(const ConstructionParams& params, std::span<const LevelLattice> lattices,
                                         std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  params.validate();
  VerificationReport rep;
  rep.params = params;
  rep.Lmax = static_cast<int>(lattices.size());
  rep.seed = seed;
  std::mt19937_64 rng(seed);

  rep.checks.push_back(check_ordering(lattices));
  rep.checks.push_back(check_block_disjointness(lattices));
  rep.checks.push_back(check_bijection(lattices));
  rep.checks.push_back(check_interval_property(lattices));
  rep.checks.push_back(check_max_n(lattices));
  rep.checks.push_back(check_cascade(lattices, rng));
  rep.checks.push_back(check_norm_identity(lattices, rng));
  rep.checks.push_back(check_wiener(lattices));
  rep.checks.push_back(check_sup_sandwich(lattices, seed));
  rep.checks.push_back(check_boundedness(lattices, rng));
  rep.checks.push_back(check_key_estimate(params, lattices));
  rep.checks.push_back(check_summation_by_parts(rng));
  rep.checks.push_back(check_decomposition(params, lattices, rng));
  rep.checks.push_back(check_epsilon_identity(params));

  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace bohrgap
