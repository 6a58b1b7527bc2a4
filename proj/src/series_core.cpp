#include "bohrgap/series_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "bohrgap/errors.hpp"

namespace bohrgap {

namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

std::size_t count_at_most(const LevelLattice& lat, std::uint64_t P) {
  return static_cast<std::size_t>(std::upper_bound(lat.n.begin(), lat.n.end(), P) - lat.n.begin());
}

void check_epsilon_range(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw InvalidParameter("epsilon must lie in [0, 1)");
}

}  // namespace

cplx SignAssignment::beta(int L) const {
  auto it = betas.find(L);
  return it == betas.end() ? cplx{1.0, 0.0} : it->second;
}

std::optional<cplx> PartialSumTrace::boundary_value(int L) const {
  for (const auto& cp : checkpoints) {
    if (cp.boundary && cp.level == L) return cp.value;
  }
  return std::nullopt;
}

DirichletSeries::DirichletSeries(ConstructionParams params, std::vector<LevelLattice> lattices, SignAssignment signs)
    : params_(std::move(params)),
      lattices_(std::make_shared<const std::vector<LevelLattice>>(std::move(lattices))),
      signs_(std::move(signs)) {
  params_.validate();
  for (std::size_t i = 0; i < lattices_->size(); ++i) {
    if ((*lattices_)[i].level != static_cast<int>(i) + 1) {
      throw InvalidParameter("lattices must cover levels 1..L in order");
    }
    phases_.push_back(level_phases((*lattices_)[i]));
  }
}

DirichletSeries::DirichletSeries(const ConstructionParams& params, int max_level, SignAssignment signs)
    : DirichletSeries(params, build_levels(params, max_level), std::move(signs)) {}

const std::vector<cplx>& DirichletSeries::phases(int L) const {
  if (L < 1 || L > max_level()) throw InvalidParameter("level outside the series");
  return phases_[static_cast<std::size_t>(L) - 1];
}

const LevelLattice& DirichletSeries::lattice(int L) const {
  if (L < 1 || L > max_level()) throw InvalidParameter("level outside the series");
  return (*lattices_)[static_cast<std::size_t>(L) - 1];
}

double DirichletSeries::magnitude(int L) const { return std::exp2(-params_.X * L); }

std::vector<CoefficientTerm> DirichletSeries::terms() const {
  std::vector<CoefficientTerm> out;
  for (const auto& lat : *lattices_) {
    const auto& ph = phases(lat.level);
    const double mag = magnitude(lat.level);
    const cplx beta = signs_.beta(lat.level);
    for (std::size_t pos = 0; pos < lat.size(); ++pos) {
      auto idx = lat.index(pos);
      out.push_back({lat.n[pos], {idx.begin(), idx.end()}, lat.level, ph[pos], mag, beta});
    }
  }
  return out;
}

std::vector<cplx> level_phases(const LevelLattice& lattice) {
  WalshPolynomial poly(lattice.r, lattice.level);
  std::vector<cplx> out(lattice.size());
  for (std::size_t pos = 0; pos < lattice.size(); ++pos) out[pos] = q_coefficient(poly, lattice.index(pos));
  return out;
}

cplx coefficient(const DirichletSeries& series, std::uint64_t n) {
  for (const auto& lat : series.lattices()) {
    if (lat.size() == 0 || n < lat.min_n() || n > lat.max_n()) continue;
    const std::size_t pos = lat.find(n);
    if (pos == lat.size()) return {0.0, 0.0};
    return series.signs().beta(lat.level) * series.magnitude(lat.level) * series.phases(lat.level)[pos];
  }
  return {0.0, 0.0};
}

cplx prefix_phase_sum(const LevelLattice& lattice, std::uint64_t P) {
  const auto phases = level_phases(lattice);
  const std::size_t count = count_at_most(lattice, P);
  cplx sum{0.0, 0.0};
  for (std::size_t pos = 0; pos < count; ++pos) sum += phases[pos];
  return sum;
}

KeyEstimateScan key_estimate_scan(const LevelLattice& lattice) {
  if (lattice.size() > (std::size_t{1} << 24)) throw CapacityError("lattice too large for an exhaustive prefix scan");
  const auto phases = level_phases(lattice);
  KeyEstimateScan scan;
  cplx sum{0.0, 0.0};
  for (std::size_t pos = 0; pos < phases.size(); ++pos) {
    sum += phases[pos];
    const double a = std::abs(sum);
    if (a > scan.max_abs) {
      scan.max_abs = a;
      scan.attaining_p = lattice.n[pos];
    }
  }
  return scan;
}

double key_estimate_scale(const ConstructionParams& params, int L) {
  return std::exp2(params.key_exponent() * L) * L;
}

cplx n_pow_minus_s(std::uint64_t n, cplx s) {
  const long double ln = std::log(static_cast<long double>(n));
  const double mag = static_cast<double>(std::exp(-static_cast<long double>(s.real()) * ln));
  const long double angle = std::fmod(-static_cast<long double>(s.imag()) * ln, kTwoPiL);
  return std::polar(mag, static_cast<double>(angle));
}

cplx omega_L(const LevelLattice& lattice, double epsilon) {
  check_epsilon_range(epsilon);
  return gamma_partial(lattice, lattice.max_n(), epsilon);
}

cplx gamma_partial(const LevelLattice& lattice, std::uint64_t N, double epsilon) {
  if (lattice.size() == 0 || N < lattice.min_n()) {
    throw InvalidParameter("N is below the smallest n of this level; it is not the frontier level L*(N)");
  }
  const auto phases = level_phases(lattice);
  const std::size_t count = count_at_most(lattice, N);
  cplx sum{0.0, 0.0};
  for (std::size_t pos = 0; pos < count; ++pos) {
    sum += phases[pos] * std::pow(static_cast<double>(lattice.n[pos]), epsilon);
  }
  return sum;
}

cplx level_polynomial(const LevelLattice& lattice, cplx s) {
  const auto phases = level_phases(lattice);
  cplx sum{0.0, 0.0};
  for (std::size_t pos = 0; pos < lattice.size(); ++pos) sum += phases[pos] * n_pow_minus_s(lattice.n[pos], s);
  return sum;
}

TorusPoint dirichlet_point(const LevelLattice& lattice, cplx s) {
  TorusPoint z;
  for (const auto& block : lattice.prime_blocks) {
    std::vector<cplx> b(block.size());
    for (std::size_t i = 0; i < block.size(); ++i) b[i] = n_pow_minus_s(block[i], s);
    z.blocks.push_back(std::move(b));
  }
  return z;
}

double summation_by_parts_check(std::span<const double> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw InvalidParameter("summation by parts needs sequences of equal length");
  if (a.empty()) throw InvalidParameter("summation by parts needs p >= 1");
  cplx lhs{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) lhs += a[i] * b[i];
  cplx rhs{0.0, 0.0};
  cplx partial{0.0, 0.0};
  for (std::size_t j = 0; j + 1 < a.size(); ++j) {
    partial += b[j];
    rhs += (a[j] - a[j + 1]) * partial;
  }
  partial += b.back();
  rhs += a.back() * partial;
  return std::abs(lhs - rhs);
}

std::optional<Rational> epsilon_exact(const ConstructionParams& params) {
  if (!params.x_is_default) return std::nullopt;
  auto key = params.key_exponent_exact();
  auto x = params.default_x_exact();
  if (!key || !x) return std::nullopt;
  return -(*key - *x) / Rational(params.M);
}

double epsilon_for_convergence(const ConstructionParams& params) {
  params.validate();
  if (auto exact = epsilon_exact(params)) {
    if (*exact <= Rational(0)) throw NonPositiveEpsilon(exact->to_double());
    return exact->to_double();
  }
  const double eps = -(params.key_exponent() - params.X) / params.M;
  if (!(eps > 1e-15)) throw NonPositiveEpsilon(eps);
  return eps;
}

std::vector<int> greedy_sign_exponents(std::span<const double> magnitudes) {
  std::vector<int> d;
  d.reserve(magnitudes.size());
  double S = 0;
  for (double t : magnitudes) {
    const int dl = S <= 0 ? 0 : 1;
    d.push_back(dl);
    S += dl == 0 ? t : -t;
  }
  return d;
}

SignAssignment choose_signs(const ConstructionParams& params, std::span<const LevelLattice> lattices, double epsilon) {
  check_epsilon_range(epsilon);
  SignAssignment out;
  out.epsilon = epsilon;
  double S = 0;
  for (const auto& lat : lattices) {
    const cplx omega = omega_L(lat, epsilon);
    const double abs_omega = std::abs(omega);
    const double term = std::exp2(-params.X * lat.level) * abs_omega;
    const int d = S <= 0 ? 0 : 1;
    S += d == 0 ? term : -term;
    const double sign = d == 0 ? 1.0 : -1.0;
    out.betas[lat.level] = abs_omega > 0 ? sign * std::conj(omega) / abs_omega : cplx{1.0, 0.0};
    out.dees[lat.level] = d;
    out.omega_abs[lat.level] = abs_omega;
    out.running_sum[lat.level] = S;
  }
  return out;
}

PartialSumTrace partial_sum_trace(const DirichletSeries& series, cplx s, std::size_t checkpoint_every) {
  if (checkpoint_every == 0) throw InvalidParameter("checkpoint interval must be >= 1");
  PartialSumTrace trace;
  trace.s = s;
  cplx acc{0.0, 0.0};
  std::size_t count = 0;
  for (const auto& lat : series.lattices()) {
    const auto& ph = series.phases(lat.level);
    const cplx weight = series.signs().beta(lat.level) * series.magnitude(lat.level);
    for (std::size_t pos = 0; pos < lat.size(); ++pos) {
      acc += weight * ph[pos] * n_pow_minus_s(lat.n[pos], s);
      ++count;
      const bool boundary = pos + 1 == lat.size();
      if (boundary || count % checkpoint_every == 0) {
        trace.checkpoints.push_back({lat.n[pos], acc, lat.level, boundary});
      }
    }
    trace.level_boundaries.push_back(lat.max_n());
  }
  return trace;
}

cplx level_decomposition(const DirichletSeries& series, cplx s, int L) {
  cplx sum{0.0, 0.0};
  for (int l = 1; l <= L; ++l) {
    const auto& lat = series.lattice(l);
    WalshPolynomial poly(lat.r, l);
    sum += series.signs().beta(l) * series.magnitude(l) * evaluate_cascade(poly, dirichlet_point(lat, s));
  }
  return sum;
}

std::string trace_to_csv(const PartialSumTrace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "N,re,im,abs,level,boundary\n";
  for (const auto& cp : trace.checkpoints) {
    os << cp.N << ',' << cp.value.real() << ',' << cp.value.imag() << ',' << std::abs(cp.value) << ','
       << cp.level << ',' << (cp.boundary ? 1 : 0) << '\n';
  }
  return os.str();
}

PartialSumTrace trace_from_csv(const std::string& csv) {
  PartialSumTrace trace;
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line.rfind("N,re,im,abs,level", 0) != 0) {
    throw InvalidParameter("trace CSV header missing");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(row, field, ',')) f.push_back(field);
    if (f.size() < 5) throw InvalidParameter("trace CSV row has too few columns");
    TracePoint cp;
    cp.N = std::stoull(f[0]);
    cp.value = {std::stod(f[1]), std::stod(f[2])};
    cp.level = std::stoi(f[4]);
    cp.boundary = f.size() > 5 && f[5] == "1";
    trace.checkpoints.push_back(cp);
    if (cp.boundary) trace.level_boundaries.push_back(cp.N);
  }
  return trace;
}

}  // namespace bohrgap
