#include "bohrgap/walsh_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "bohrgap/errors.hpp"

namespace bohrgap {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(2 pi i e / r) with e reduced mod r before the transcendental call.
cplx unit_root(std::uint64_t e, std::uint64_t r) {
  return std::polar(1.0, kTwoPi * static_cast<double>(e % r) / static_cast<double>(r));
}

cplx unit_phase(cplx c) {
  const double a = std::abs(c);
  return a > 0 ? c / a : cplx{1.0, 0.0};
}

double wrap_angle(double a) {
  a = std::remainder(a, kTwoPi);
  return a;
}

}  // namespace

std::size_t TorusPoint::coordinate_count() const {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  return n;
}

double TorusPoint::max_modulus_defect() const {
  double d = 0;
  for (const auto& b : blocks)
    for (const auto& c : b) d = std::max(d, std::abs(std::abs(c) - 1.0));
  return d;
}

double TorusPoint::max_modulus() const {
  double d = 0;
  for (const auto& b : blocks)
    for (const auto& c : b) d = std::max(d, std::abs(c));
  return d;
}

WalshPolynomial::WalshPolynomial(const ConstructionParams& params, int L) : r_(params.block_sizes(L)), level_(L) {
  build_tables();
}

WalshPolynomial::WalshPolynomial(std::vector<std::size_t> r, int level) : r_(std::move(r)), level_(level) {
  if (r_.empty()) throw InvalidParameter("WalshPolynomial needs at least one block");
  for (std::size_t j = 0; j < r_.size(); ++j) {
    if (r_[j] == 0) throw InvalidParameter("block sizes must be positive");
    if (j > 0 && r_[j] < r_[j - 1]) throw InvalidParameter("block sizes must be nondecreasing");
  }
  build_tables();
}

void WalshPolynomial::build_tables() {
  roots_.clear();
  for (std::size_t k = 0; k < r_.size(); ++k) {
    const std::size_t r = (k + 1 < r_.size()) ? r_[k + 1] : next_block_size();
    std::vector<cplx> tab(r);
    for (std::size_t e = 0; e < r; ++e) tab[e] = unit_root(e, r);
    roots_.push_back(std::move(tab));
  }
}

std::size_t WalshPolynomial::monomial_count() const noexcept {
  std::size_t n = 1;
  for (auto rj : r_) n *= rj;
  return n;
}

void WalshPolynomial::check_shape(const TorusPoint& z) const {
  if (z.blocks.size() != r_.size()) throw InvalidParameter("torus point has the wrong number of blocks");
  for (std::size_t j = 0; j < r_.size(); ++j) {
    if (z.blocks[j].size() != r_[j]) throw InvalidParameter("torus point block has the wrong length");
  }
}

TorusPoint WalshPolynomial::ones() const {
  TorusPoint z;
  for (auto rj : r_) z.blocks.emplace_back(rj, cplx{1.0, 0.0});
  return z;
}

cplx q_coefficient(const WalshPolynomial& poly, std::span<const std::uint32_t> idx) {
  const auto& r = poly.block_sizes();
  if (idx.size() != r.size()) throw InvalidParameter("multi-index has the wrong length");
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (idx[j] >= r[j]) throw InvalidParameter("multi-index entry out of range");
  }
  double turns = 0;
  for (std::size_t j = 1; j < r.size(); ++j) {
    const std::uint64_t e = (static_cast<std::uint64_t>(idx[j - 1]) * idx[j]) % r[j];
    turns += static_cast<double>(e) / static_cast<double>(r[j]);
  }
  turns -= std::floor(turns);
  return std::polar(1.0, kTwoPi * turns);
}

cplx evaluate_direct(const WalshPolynomial& poly, const TorusPoint& z) {
  poly.check_shape(z);
  const auto& r = poly.block_sizes();
  const std::size_t M = r.size();
  std::vector<std::uint32_t> idx(M, 0);
  cplx sum{0.0, 0.0};
  const std::size_t total = poly.monomial_count();
  for (std::size_t count = 0; count < total; ++count) {
    cplx term = q_coefficient(poly, idx);
    for (std::size_t j = 0; j < M; ++j) term *= z.blocks[j][idx[j]];
    sum += term;
    for (std::size_t j = M; j-- > 0;) {
      if (++idx[j] < r[j]) break;
      idx[j] = 0;
    }
  }
  return sum;
}

cplx evaluate_cascade(const WalshPolynomial& poly, const TorusPoint& z) {
  poly.check_shape(z);
  const auto& r = poly.block_sizes();
  std::vector<cplx> v(r[0], cplx{1.0, 0.0});
  std::vector<cplx> next;
  for (std::size_t k = 0; k < r.size(); ++k) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= z.blocks[k][i];
    const std::size_t rows = (k + 1 < r.size()) ? r[k + 1] : poly.next_block_size();
    next.assign(rows, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < rows; ++i) {
      cplx acc{0.0, 0.0};
      for (std::size_t c = 0; c < v.size(); ++c) acc += poly.link_root(k, static_cast<std::uint64_t>(i) * c) * v[c];
      next[i] = acc;
    }
    v.swap(next);
  }
  return v[0];
}

double walsh_norm_identity_check(std::size_t r1, std::size_t r2, std::span<const cplx> v) {
  if (r1 == 0 || r1 > r2) throw InvalidParameter("Walsh matrix needs 0 < r1 <= r2");
  if (v.size() != r1) throw InvalidParameter("vector length must equal r1");
  double vnorm2 = 0;
  for (const auto& c : v) vnorm2 += std::norm(c);
  if (vnorm2 == 0) throw InvalidParameter("zero vector");
  double out2 = 0;
  for (std::size_t i = 0; i < r2; ++i) {
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < r1; ++j) acc += unit_root(static_cast<std::uint64_t>(i) * j, r2) * v[j];
    out2 += std::norm(acc);
  }
  return out2 / (static_cast<double>(r2) * vnorm2);
}

std::uint64_t wiener_norm(const WalshPolynomial& poly) {
  std::uint64_t n = 1;
  for (auto rj : poly.block_sizes()) n *= rj;
  return n;
}

double sup_norm_upper(const WalshPolynomial& poly) {
  double prod = static_cast<double>(poly.next_block_size());
  for (auto rj : poly.block_sizes()) prod *= static_cast<double>(rj);
  return std::sqrt(prod);
}

double bh_certificate(const WalshPolynomial& poly) {
  const double M = poly.degree();
  return std::pow(static_cast<double>(wiener_norm(poly)), (M + 1.0) / (2.0 * M));
}

std::vector<cplx> block_gradient(const WalshPolynomial& poly, const TorusPoint& z, std::size_t j) {
  const auto& r = poly.block_sizes();
  const std::size_t M = r.size();
  if (j >= M) throw InvalidParameter("block index out of range");

  // left message into block j: sum over i_1..i_{j-1} of the chain ending at i_j
  std::vector<cplx> left(r[0], cplx{1.0, 0.0});
  for (std::size_t k = 0; k < j; ++k) {
    std::vector<cplx> next(r[k + 1], cplx{0.0, 0.0});
    for (std::size_t a = 0; a < r[k]; ++a) {
      const cplx w = left[a] * z.blocks[k][a];
      for (std::size_t b = 0; b < r[k + 1]; ++b) next[b] += w * poly.link_root(k, static_cast<std::uint64_t>(a) * b);
    }
    left.swap(next);
  }
  // right message out of block j; the last link contributes row 0 of B^{M+1,M}, i.e. ones
  std::vector<cplx> right(r[M - 1], cplx{1.0, 0.0});
  for (std::size_t k = M - 1; k > j; --k) {
    std::vector<cplx> prev(r[k - 1], cplx{0.0, 0.0});
    for (std::size_t a = 0; a < r[k - 1]; ++a) {
      cplx acc{0.0, 0.0};
      for (std::size_t b = 0; b < r[k]; ++b) {
        acc += poly.link_root(k - 1, static_cast<std::uint64_t>(a) * b) * z.blocks[k][b] * right[b];
      }
      prev[a] = acc;
    }
    right.swap(prev);
  }
  std::vector<cplx> g(r[j]);
  for (std::size_t i = 0; i < r[j]; ++i) g[i] = left[i] * right[i];
  return g;
}

SupNormWitness make_witness(const WalshPolynomial& poly, TorusPoint point, cplx beta) {
  poly.check_shape(point);
  SupNormWitness w;
  w.q_value = evaluate_cascade(poly, point);
  w.value = std::abs(w.q_value);
  w.beta = beta;
  // beta * tau * Q = |Q|
  w.tau = w.value > 0 ? std::conj(unit_phase(beta * w.q_value)) : cplx{1.0, 0.0};
  w.normalized_point = point;
  for (auto& c : w.normalized_point.blocks[0]) c *= w.tau;
  w.point = std::move(point);
  return w;
}

std::vector<double> phase_ascent(const WalshPolynomial& poly, TorusPoint& z, std::size_t max_sweeps, double tol) {
  poly.check_shape(z);
  std::vector<double> values;
  double current = std::abs(evaluate_cascade(poly, z));
  values.push_back(current);
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < z.blocks.size(); ++j) {
      const auto g = block_gradient(poly, z, j);
      auto& block = z.blocks[j];
      cplx q{0.0, 0.0};
      for (std::size_t i = 0; i < g.size(); ++i) q += g[i] * block[i];
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double gabs = std::abs(g[i]);
        if (gabs == 0) continue;
        const cplx rest = q - g[i] * block[i];
        // |g z + rest| is largest when g z points along rest
        block[i] = unit_phase(rest) * std::conj(g[i]) / gabs;
        q = rest + g[i] * block[i];
      }
    }
    const double next = std::abs(evaluate_cascade(poly, z));
    values.push_back(next);
    if (next - current <= tol * std::max(1.0, current)) break;
    current = next;
  }
  return values;
}

SupNormWitness sup_norm_lower_search(const WalshPolynomial& poly, std::size_t budget, std::uint64_t seed,
                                     cplx beta) {
  if (budget == 0) throw InvalidParameter("search budget must be >= 1");
  constexpr std::size_t kSweepsPerStart = 400;
  std::mt19937_64 rng(seed);
  std::size_t remaining = budget;
  TorusPoint best_point;
  double best = -1;
  std::vector<double> history;
  std::size_t starts = 0;
  while (remaining > 0) {
    TorusPoint z = random_torus_point(poly, rng);
    const auto values = phase_ascent(poly, z, std::min(remaining, kSweepsPerStart));
    const std::size_t used = std::max<std::size_t>(1, values.size() - 1);
    remaining -= std::min(remaining, used);
    ++starts;
    for (std::size_t s = 1; s < values.size(); ++s) {
      history.push_back(std::max(best, values[s]));
    }
    if (values.back() > best) {
      best = values.back();
      best_point = std::move(z);
    }
  }
  SupNormWitness w = make_witness(poly, std::move(best_point), beta);
  w.history = std::move(history);
  w.sweeps = budget;
  w.starts = starts;
  return w;
}

TorusPoint constrained_ascent(const WalshPolynomial& poly, const TorusPoint& center, double half_angle, cplx beta,
                              std::size_t max_sweeps, double tol) {
  poly.check_shape(center);
  TorusPoint z = center;
  std::vector<std::vector<double>> centre_angle;
  for (const auto& b : center.blocks) {
    std::vector<double> a(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = std::arg(b[i]);
    centre_angle.push_back(std::move(a));
  }
  double current = std::real(beta * evaluate_cascade(poly, z));
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t j = 0; j < z.blocks.size(); ++j) {
      const auto g = block_gradient(poly, z, j);
      for (std::size_t i = 0; i < g.size(); ++i) {
        const cplx bg = beta * g[i];
        if (std::abs(bg) == 0) continue;
        // Re(bg z) peaks at arg z = -arg(bg); take the nearest admissible phase
        const double offset =
            std::clamp(wrap_angle(-std::arg(bg) - centre_angle[j][i]), -half_angle, half_angle);
        z.blocks[j][i] = std::polar(1.0, centre_angle[j][i] + offset);
      }
    }
    const double next = std::real(beta * evaluate_cascade(poly, z));
    if (next - current <= tol * std::max(1.0, std::abs(current))) break;
    current = next;
  }
  return z;
}

}  // namespace bohrgap
