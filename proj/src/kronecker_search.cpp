#include "bohrgap/kronecker_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "bohrgap/errors.hpp"
#include "bohrgap/series_core.hpp"

namespace bohrgap {

namespace {

// chord |e^{ia} - e^{ib}| <= delta  <=>  |a - b| <= 2 asin(delta / 2)
double half_angle_for(double delta) { return 2.0 * std::asin(std::min(1.0, delta / 2.0)); }

struct ChunkOutcome {
  std::optional<std::size_t> first_hit;
  std::size_t best_index = 0;
  double best_ratio = std::numeric_limits<double>::infinity();
  std::size_t scanned = 0;
};

ChunkOutcome scan_chunk(const ApproximationTarget& target, std::size_t begin, std::size_t end, double step) {
  ChunkOutcome out;
  for (std::size_t k = begin; k < end; ++k) {
    const double t = static_cast<double>(k) * step;
    ++out.scanned;
    double worst = 0;
    for (const auto& e : target.entries) {
      const double ratio = std::abs(prime_pow_minus_it(e.prime, t) - e.target) / e.delta;
      worst = std::max(worst, ratio);
      if (worst > 1.0 && worst >= out.best_ratio) break;
    }
    if (worst < out.best_ratio) {
      out.best_ratio = worst;
      out.best_index = k;
    }
    if (worst <= 1.0) {
      out.first_hit = k;
      break;
    }
  }
  return out;
}

double level_error_budget(std::size_t monomials, int M, double e) {
  // |prod(y + d) - prod(y)| <= M e (1 + e)^{M-1} per monomial for unit y, |d| <= e
  return static_cast<double>(monomials) * M * e * std::pow(1.0 + e, M - 1);
}

}  // namespace

void ApproximationTarget::validate() const {
  std::set<std::uint64_t> seen;
  for (const auto& e : entries) {
    if (std::abs(std::abs(e.target) - 1.0) > 1e-12) throw InvalidParameter("approximation targets must be unit complex");
    if (!(e.delta > 0)) throw InvalidParameter("approximation tolerances must be positive");
    if (!seen.insert(e.prime_index).second) throw InvalidParameter("approximation targets repeat a prime index");
  }
}

double ApproximationTarget::max_log_prime() const {
  double m = 0;
  for (const auto& e : entries) m = std::max(m, std::log(static_cast<double>(e.prime)));
  return m;
}

double ApproximationTarget::min_delta() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& e : entries) m = std::min(m, e.delta);
  return m;
}

cplx prime_pow_minus_it(std::uint64_t p, double t) { return n_pow_minus_s(p, cplx{0.0, t}); }

SearchResult evaluate_t(const ApproximationTarget& target, double t) {
  SearchResult res;
  res.t = t;
  res.scanned = 1;
  res.residuals.reserve(target.entries.size());
  for (const auto& e : target.entries) {
    const double r = std::abs(prime_pow_minus_it(e.prime, t) - e.target);
    res.residuals.push_back(r);
    res.worst_ratio = std::max(res.worst_ratio, r / e.delta);
  }
  res.achieved = res.worst_ratio <= 1.0;
  return res;
}

ApproximationTarget assemble_targets(std::span<const LevelLattice> lattices,
                                     const std::map<int, SupNormWitness>& witnesses,
                                     const std::map<int, cplx>& betas, const std::map<int, double>& deltas) {
  ApproximationTarget target;
  for (const auto& [L, witness] : witnesses) {
    auto lat = std::find_if(lattices.begin(), lattices.end(), [L = L](const auto& l) { return l.level == L; });
    if (lat == lattices.end()) throw InvalidParameter("no lattice for witness level " + std::to_string(L));
    auto d = deltas.find(L);
    if (d == deltas.end()) throw InvalidParameter("no tolerance for level " + std::to_string(L));
    const cplx beta = betas.count(L) ? betas.at(L) : cplx{1.0, 0.0};
    WalshPolynomial poly(lat->r, L);
    const SupNormWitness w = make_witness(poly, witness.point, beta);
    for (std::size_t j = 0; j < lat->prime_blocks.size(); ++j) {
      for (std::size_t i = 0; i < lat->prime_blocks[j].size(); ++i) {
        cplx y = w.normalized_point.blocks[j][i];
        y /= std::abs(y);
        target.entries.push_back(
            {lat->index_sets[j][i], lat->prime_blocks[j][i], y, d->second, L, static_cast<int>(j) + 1, i});
      }
    }
    target.levels.push_back(L);
  }
  for (const auto& lat : lattices) {
    if (!witnesses.count(lat.level)) throw InvalidParameter("missing witness for level " + std::to_string(lat.level));
  }
  target.validate();
  return target;
}

double default_step(const ApproximationTarget& target) {
  if (target.entries.empty()) return 1.0;
  return target.min_delta() / target.max_log_prime();
}

SearchResult grid_search_t(const ApproximationTarget& target, double t_max, double step) {
  if (!(step > 0) || !(t_max > 0)) throw InvalidParameter("grid search needs step > 0 and t_max > 0");
  target.validate();
  const auto count = static_cast<std::size_t>(std::floor(t_max / step)) + 1;
  const std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  constexpr std::size_t chunk = std::size_t{1} << 16;

  ChunkOutcome total;
  for (std::size_t batch = 0; batch < count; batch += chunk * threads) {
    std::vector<ChunkOutcome> outcomes(threads);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) {
      const std::size_t b = batch + w * chunk;
      const std::size_t e = std::min(count, b + chunk);
      if (b >= e) continue;
      if (threads == 1) {
        outcomes[w] = scan_chunk(target, b, e, step);
      } else {
        pool.emplace_back([&, w, b, e] { outcomes[w] = scan_chunk(target, b, e, step); });
      }
    }
    for (auto& th : pool) th.join();
    // chunks are in ascending t, so the first hit in chunk order is the global first hit
    for (const auto& o : outcomes) {
      total.scanned += o.scanned;
      if (o.best_ratio < total.best_ratio) {
        total.best_ratio = o.best_ratio;
        total.best_index = o.best_index;
      }
      if (o.first_hit && !total.first_hit) total.first_hit = o.first_hit;
    }
    if (total.first_hit) break;
  }
  const std::size_t k = total.first_hit ? *total.first_hit : total.best_index;
  SearchResult res = evaluate_t(target, static_cast<double>(k) * step);
  res.scanned = total.scanned;
  return res;
}

SearchResult refine_t(const ApproximationTarget& target, double t0, double radius) {
  target.validate();
  SearchResult best = evaluate_t(target, t0);
  std::size_t evaluations = 1;
  if (!(radius > 0)) return best;

  constexpr int kGrid = 400;
  const double h = 2.0 * radius / kGrid;
  double centre = t0;
  double centre_ratio = best.worst_ratio;
  for (int g = 0; g <= kGrid; ++g) {
    const double t = t0 - radius + g * h;
    const double r = evaluate_t(target, t).worst_ratio;
    ++evaluations;
    if (r < centre_ratio) {
      centre_ratio = r;
      centre = t;
    }
  }
  // golden-section polish on [centre - h, centre + h]
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = centre - h, b = centre + h;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = evaluate_t(target, c).worst_ratio, fd = evaluate_t(target, d).worst_ratio;
  evaluations += 2;
  for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(centre)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = evaluate_t(target, c).worst_ratio;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = evaluate_t(target, d).worst_ratio;
    }
    ++evaluations;
  }
  for (double t : {centre, c, d, 0.5 * (a + b)}) {
    SearchResult cand = evaluate_t(target, t);
    ++evaluations;
    if (cand.worst_ratio < best.worst_ratio) best = std::move(cand);
  }
  best.scanned = evaluations;
  return best;
}

double default_delta(int M, int L) { return std::max(std::exp2(-(2.0 * M + 1.0) * L), 0.05); }

int levels_for_target(int M, double K) {
  if (!(K >= 0)) throw InvalidParameter("K must be nonnegative");
  return static_cast<int>(std::ceil(std::exp2(M + 1) * K - 1e-12));
}

DemonstrationReport demonstrate_large_partial_sum(const ConstructionParams& params, double K,
                                                  const DemonstrationOptions& options) {
  DemonstrationReport rep = demonstrate_levels(params, levels_for_target(params.M, K), options);
  rep.K = K;
  return rep;
}

DemonstrationReport demonstrate_levels(const ConstructionParams& params, int L_K,
                                       const DemonstrationOptions& options) {
  params.validate();
  if (L_K < 0) throw InvalidParameter("L_K must be nonnegative");
  DemonstrationReport rep;
  rep.L_K = L_K;
  rep.K = L_K / std::exp2(params.M + 1);
  rep.t_max = options.t_max;
  rep.seed = options.seed;
  rep.witness_mode = options.mode == WitnessMode::fixed ? "fixed" : "trajectory";
  if (L_K == 0) {
    rep.achieved = true;
    return rep;
  }

  const auto lattices = build_levels(params, L_K);
  std::map<int, double> deltas;
  std::map<int, cplx> betas;
  std::vector<WalshPolynomial> polys;
  std::map<int, SupNormWitness> reference;
  for (const auto& lat : lattices) {
    const int L = lat.level;
    deltas[L] = options.deltas.count(L) ? options.deltas.at(L) : default_delta(params.M, L);
    betas[L] = options.betas.count(L) ? options.betas.at(L) : cplx{1.0, 0.0};
    polys.emplace_back(lat.r, L);
    reference.emplace(L, sup_norm_lower_search(polys.back(), options.witness_budget,
                                               options.seed + static_cast<std::uint64_t>(L), betas[L]));
  }

  double min_delta = std::numeric_limits<double>::infinity();
  double max_log_p = 0;
  for (const auto& lat : lattices) {
    min_delta = std::min(min_delta, deltas[lat.level]);
    for (const auto& block : lat.prime_blocks)
      for (auto p : block) max_log_p = std::max(max_log_p, std::log(static_cast<double>(p)));
  }
  rep.step = options.step ? *options.step : min_delta / max_log_p;

  std::map<int, SupNormWitness> witnesses;
  SearchResult found;
  if (options.mode == WitnessMode::fixed) {
    witnesses = reference;
    const auto target = assemble_targets(lattices, witnesses, betas, deltas);
    found = grid_search_t(target, options.t_max, rep.step);
    rep.scanned = found.scanned;
    if (found.achieved) found = refine_t(target, found.t, rep.step);
  } else {
    const auto count = static_cast<std::size_t>(std::floor(options.t_max / rep.step)) + 1;
    bool hit = false;
    for (std::size_t k = 0; k < count && !hit; ++k) {
      const double t = static_cast<double>(k) * rep.step;
      ++rep.scanned;
      std::map<int, SupNormWitness> local;
      bool ok = true;
      for (std::size_t li = 0; li < lattices.size() && ok; ++li) {
        const auto& lat = lattices[li];
        const int L = lat.level;
        const TorusPoint centre = dirichlet_point(lat, cplx{0.0, t});
        // stay a hair inside the box so rounding cannot push a residual past delta
        const double half = half_angle_for(deltas[L]) * (1.0 - 1e-9);
        TorusPoint z = constrained_ascent(polys[li], centre, half, betas[L], 200);
        SupNormWitness w = make_witness(polys[li], std::move(z), betas[L]);
        if (w.value < options.value_fraction * reference.at(L).value) {
          ok = false;
          break;
        }
        for (std::size_t j = 0; j < centre.blocks.size() && ok; ++j)
          for (std::size_t i = 0; i < centre.blocks[j].size() && ok; ++i)
            ok = std::abs(centre.blocks[j][i] - w.normalized_point.blocks[j][i]) <= deltas[L];
        if (ok) local.emplace(L, std::move(w));
      }
      if (ok) {
        hit = true;
        witnesses = std::move(local);
        const auto target = assemble_targets(lattices, witnesses, betas, deltas);
        found = refine_t(target, t, rep.step);
      }
    }
    if (!hit) {
      witnesses = reference;
      found = evaluate_t(assemble_targets(lattices, witnesses, betas, deltas), 0.0);
    }
  }

  rep.t_K = found.t;
  rep.achieved = found.achieved;
  rep.N_K = lattices.back().max_n();

  // per-level accounting; residuals are listed level by level in assemble order
  const auto target = assemble_targets(lattices, witnesses, betas, deltas);
  const SearchResult at = evaluate_t(target, rep.t_K);
  cplx model{0.0, 0.0};
  for (std::size_t li = 0; li < lattices.size(); ++li) {
    const auto& lat = lattices[li];
    const int L = lat.level;
    const double weight = std::exp2(-params.X * L);
    LevelReport lr;
    lr.L = L;
    lr.delta = deltas[L];
    lr.reference_value = reference.at(L).value;
    const SupNormWitness w = make_witness(polys[li], witnesses.at(L).point, betas[L]);
    lr.witness_value = w.value;
    for (std::size_t e = 0; e < target.entries.size(); ++e) {
      if (target.entries[e].level == L) lr.residual_max = std::max(lr.residual_max, at.residuals[e]);
    }
    lr.error_budget = level_error_budget(polys[li].monomial_count(), params.M, lr.residual_max);
    lr.polynomial_value = betas[L] * evaluate_cascade(polys[li], dirichlet_point(lat, cplx{0.0, rep.t_K}));
    model += betas[L] * weight * evaluate_cascade(polys[li], w.normalized_point);
    rep.partial_sum += weight * lr.polynomial_value;
    rep.witness_sum += weight * lr.witness_value;
    rep.error_budget += weight * lr.error_budget;
    rep.per_level.push_back(lr);
  }
  rep.bound = rep.witness_sum - rep.error_budget;
  rep.deviation = std::abs(rep.partial_sum - model);

  if (!rep.achieved) {
    throw SearchExhausted("no t in [0, " + std::to_string(options.t_max) + "] meets the tolerances", rep);
  }
  return rep;
}

}  // namespace bohrgap
