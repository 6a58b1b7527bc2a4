#include "bohrgap/params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bohrgap/errors.hpp"

namespace bohrgap {

namespace {

using uwide = unsigned __int128;

// base^exp, saturating at the 127-bit ceiling; returns false on saturation.
bool checked_pow(uwide base, std::int64_t exp, uwide& out) {
  const uwide limit = static_cast<uwide>(1) << 126;
  uwide acc = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (base != 0 && acc > limit / base) return false;
    acc *= base;
  }
  out = acc;
  return true;
}

// floor(2^{p L / q}) exactly when the integers involved fit, otherwise nullopt.
std::optional<std::size_t> exact_floor_pow2(const Rational& rho, int L) {
  const std::int64_t p = rho.num();
  const std::int64_t q = rho.den();
  const std::int64_t e = p * L;
  if (e < 0 || e >= 120 || q > 64) return std::nullopt;
  const uwide target = static_cast<uwide>(1) << e;
  auto m = static_cast<std::size_t>(std::floor(std::exp2(rho.to_double() * L)));
  auto fits = [&](std::size_t cand) {
    uwide pw = 0;
    return checked_pow(cand, q, pw) && pw <= target;
  };
  while (m > 0 && !fits(m)) --m;
  while (fits(m + 1)) ++m;
  return m;
}

}  // namespace

ConstructionParams ConstructionParams::make(int M, std::vector<Rational> rho, std::optional<double> X,
                                            int max_level) {
  ConstructionParams p;
  p.M = M;
  p.rho.clear();
  for (const auto& r : rho) p.rho.push_back(r.to_double());
  p.rho_exact = std::move(rho);
  p.max_level = max_level;
  p.x_is_default = !X.has_value();
  if (static_cast<int>(p.rho.size()) == M) p.X = X ? *X : p.default_x();
  p.validate();
  return p;
}

ConstructionParams ConstructionParams::make(int M, std::vector<double> rho, std::optional<double> X,
                                            int max_level) {
  ConstructionParams p;
  p.M = M;
  p.rho = std::move(rho);
  p.rho_exact.reset();
  p.max_level = max_level;
  p.x_is_default = !X.has_value();
  if (static_cast<int>(p.rho.size()) == M) p.X = X ? *X : p.default_x();
  p.validate();
  return p;
}

ConstructionParams ConstructionParams::parse(int M, std::string_view rho_list, std::optional<double> X,
                                             int max_level) {
  std::vector<Rational> exact;
  std::vector<double> approx;
  bool all_exact = true;
  std::size_t start = 0;
  while (start <= rho_list.size()) {
    auto comma = rho_list.find(',', start);
    auto item = rho_list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    try {
      exact.push_back(Rational::parse(item));
      approx.push_back(exact.back().to_double());
    } catch (const std::invalid_argument&) {
      all_exact = false;
      try {
        approx.push_back(std::stod(std::string(item)));
      } catch (const std::exception&) {
        throw InvalidParameter("cannot parse rho entry '" + std::string(item) + "'");
      }
    } catch (const std::domain_error&) {
      throw InvalidParameter("rho entry '" + std::string(item) + "' has a zero denominator");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (all_exact) return make(M, std::move(exact), X, max_level);
  return make(M, std::move(approx), X, max_level);
}

void ConstructionParams::validate() const {
  if (M < 2) throw InvalidParameter("homogeneity M must be at least 2");
  if (static_cast<int>(rho.size()) != M) {
    throw InvalidParameter("rho must have exactly M = " + std::to_string(M) + " entries");
  }
  for (std::size_t j = 0; j < rho.size(); ++j) {
    if (!(rho[j] >= 0.0 && rho[j] <= 1.0)) throw InvalidParameter("rho entries must lie in [0,1]");
    if (j > 0 && rho[j] < rho[j - 1]) throw InvalidParameter("rho must be nondecreasing");
  }
  if (rho.back() != 1.0) throw InvalidParameter("the last rho entry must be exactly 1");
  if (rho_exact) {
    if (rho_exact->size() != rho.size() || rho_exact->back() != Rational(1)) {
      throw InvalidParameter("exact rho must match rho and end in 1");
    }
  }
  if (!(X >= 0.0) || !std::isfinite(X)) throw InvalidParameter("decay exponent X must be >= 0");
  if (max_level < 0) throw InvalidParameter("max level must be >= 0");
}

double ConstructionParams::rho_sum() const {
  double s = 0;
  for (double r : rho) s += r;
  return s;
}

double ConstructionParams::key_exponent() const { return rho_sum() - rho[static_cast<std::size_t>(M) - 2]; }

double ConstructionParams::default_x() const { return rho_sum() * (M + 1) / (2.0 * M); }

std::optional<Rational> ConstructionParams::rho_sum_exact() const {
  if (!rho_exact) return std::nullopt;
  Rational s(0);
  for (const auto& r : *rho_exact) s += r;
  return s;
}

std::optional<Rational> ConstructionParams::key_exponent_exact() const {
  auto s = rho_sum_exact();
  if (!s) return std::nullopt;
  return *s - (*rho_exact)[static_cast<std::size_t>(M) - 2];
}

std::optional<Rational> ConstructionParams::default_x_exact() const {
  auto s = rho_sum_exact();
  if (!s) return std::nullopt;
  return *s * Rational(M + 1, 2 * M);
}

std::size_t ConstructionParams::block_size(int j, int L) const {
  if (j < 1 || j > M) throw InvalidParameter("block number out of range");
  if (L < 0) throw InvalidParameter("level must be nonnegative");
  const auto jj = static_cast<std::size_t>(j - 1);
  if (rho_exact) {
    if (auto r = exact_floor_pow2((*rho_exact)[jj], L)) return *r;
  }
  const double v = std::exp2(rho[jj] * L);
  if (v > 1e15) throw CapacityError("block size 2^(rho L) too large");
  // Nudge by a few ulps so exact powers of two are not floored to the integer below.
  return static_cast<std::size_t>(std::floor(v * (1.0 + 8 * std::numeric_limits<double>::epsilon())));
}

std::vector<std::size_t> ConstructionParams::block_sizes(int L) const {
  std::vector<std::size_t> r;
  r.reserve(static_cast<std::size_t>(M));
  for (int j = 1; j <= M; ++j) r.push_back(block_size(j, L));
  return r;
}

std::string ConstructionParams::rho_string() const {
  std::ostringstream os;
  for (std::size_t j = 0; j < rho.size(); ++j) {
    if (j) os << ',';
    if (rho_exact) {
      os << (*rho_exact)[j];
    } else {
      os << rho[j];
    }
  }
  return os.str();
}

}  // namespace bohrgap
