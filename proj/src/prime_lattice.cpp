#include "bohrgap/prime_lattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <set>
#include <shared_mutex>
#include <sstream>

#include "bohrgap/errors.hpp"

namespace bohrgap {

namespace {

class PrimeTable {
 public:
  std::uint64_t at(std::size_t k) {
    {
      std::shared_lock lock(mutex_);
      if (k <= primes_.size()) return primes_[k - 1];
    }
    std::unique_lock lock(mutex_);
    if (k > primes_.size()) grow(std::max(k, 2 * primes_.size()));
    return primes_[k - 1];
  }

 private:
  // Rosser-Schoenfeld: p_k < k (ln k + ln ln k) for k >= 6.
  static std::uint64_t upper_bound_for(std::size_t k) {
    if (k < 6) return 15;
    const double kd = static_cast<double>(k);
    return static_cast<std::uint64_t>(kd * (std::log(kd) + std::log(std::log(kd)))) + 1;
  }

  void grow(std::size_t k) {
    k = std::min(k, kMaxPrimeIndex);
    primes_ = primes_up_to(upper_bound_for(k));
    primes_.resize(std::min(primes_.size(), kMaxPrimeIndex));
  }

  std::shared_mutex mutex_;
  std::vector<std::uint64_t> primes_;
};

PrimeTable& table() {
  static PrimeTable t;
  return t;
}

void require_level(int L) {
  if (L < 1) throw InvalidParameter("level L must be >= 1");
  if (L > 40) throw CapacityError("level L too large for 64-bit indices");
}

}  // namespace

std::uint64_t prime_at(std::size_t k) {
  if (k == 0) throw InvalidParameter("prime index is 1-based");
  if (k > kMaxPrimeIndex) {
    throw CapacityError("prime index " + std::to_string(k) + " exceeds table ceiling " +
                        std::to_string(kMaxPrimeIndex));
  }
  return table().at(k);
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  // odd-only sieve: slot i stands for 2i+1
  const std::uint64_t slots = (limit - 1) / 2 + 1;
  std::vector<bool> composite(slots, false);
  for (std::uint64_t i = 1; i < slots; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(p);
    for (std::uint64_t m = p * p; m <= limit; m += 2 * p) composite[m / 2] = true;
  }
  return out;
}

std::size_t LevelLattice::find(std::uint64_t value) const {
  auto it = std::lower_bound(n.begin(), n.end(), value);
  if (it == n.end() || *it != value) return n.size();
  return static_cast<std::size_t>(it - n.begin());
}

std::vector<std::uint64_t> block_index_set(const ConstructionParams& params, int j, int L) {
  params.validate();
  if (j < 1 || j > params.M) throw InvalidParameter("block number j must be in 1..M");
  require_level(L);
  const std::size_t r = params.block_size(j, L);
  const std::uint64_t base = static_cast<std::uint64_t>(params.M + j - 1) << L;
  std::vector<std::uint64_t> out(r);
  std::iota(out.begin(), out.end(), base);
  return out;
}

LevelLattice build_level(const ConstructionParams& params, int L) {
  params.validate();
  require_level(L);
  const auto M = static_cast<std::size_t>(params.M);

  LevelLattice lat;
  lat.level = L;
  lat.M = params.M;
  lat.r = params.block_sizes(L);

  std::size_t total = 1;
  for (std::size_t rj : lat.r) {
    if (rj == 0) throw InvalidParameter("empty block");
    if (total > kMaxProductSetSize / rj) {
      throw CapacityError("product set for level " + std::to_string(L) + " exceeds " +
                          std::to_string(kMaxProductSetSize) + " entries");
    }
    total *= rj;
  }

  for (int j = 1; j <= params.M; ++j) {
    lat.index_sets.push_back(block_index_set(params, j, L));
    std::vector<std::uint64_t> primes;
    primes.reserve(lat.index_sets.back().size());
    for (std::uint64_t k : lat.index_sets.back()) primes.push_back(prime_at(k));
    lat.prime_blocks.push_back(std::move(primes));
  }

  // Enumerate in lexicographic multi-index order (i_M fastest), then sort by n.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> keyed(total);
  std::vector<std::uint32_t> digits(M, 0);
  for (std::size_t pos = 0; pos < total; ++pos) {
    std::uint64_t prod = 1;
    for (std::size_t j = 0; j < M; ++j) {
      if (__builtin_mul_overflow(prod, lat.prime_blocks[j][digits[j]], &prod)) {
        throw CapacityError("product n overflows 64 bits at level " + std::to_string(L));
      }
    }
    keyed[pos] = {prod, static_cast<std::uint32_t>(pos)};
    for (std::size_t j = M; j-- > 0;) {
      if (++digits[j] < lat.r[j]) break;
      digits[j] = 0;
    }
  }
  std::sort(keyed.begin(), keyed.end());

  lat.n.resize(total);
  lat.flat_index.resize(total * M);
  for (std::size_t out = 0; out < total; ++out) {
    lat.n[out] = keyed[out].first;
    std::size_t rem = keyed[out].second;
    for (std::size_t j = M; j-- > 0;) {
      lat.flat_index[out * M + j] = static_cast<std::uint32_t>(rem % lat.r[j]);
      rem /= lat.r[j];
    }
  }
  return lat;
}

std::vector<LevelLattice> build_levels(const ConstructionParams& params, int max_level) {
  std::vector<LevelLattice> out;
  out.reserve(static_cast<std::size_t>(std::max(max_level, 0)));
  for (int L = 1; L <= max_level; ++L) out.push_back(build_level(params, L));
  return out;
}

bool max_n_bound_check(const LevelLattice& lattice, double C) {
  const double L = lattice.level;
  const double bound = C * std::exp2(lattice.M * L) * std::pow(L, lattice.M);
  return static_cast<double>(lattice.max_n()) <= bound;
}

double calibrate_max_n_constant(std::span<const LevelLattice> lattices) {
  double c = 0;
  for (const auto& lat : lattices) {
    const double L = lat.level;
    const double root = std::pow(static_cast<double>(lat.max_n()), 1.0 / lat.M);
    c = std::max(c, root / (std::exp2(L) * L));
  }
  // pow(C,M) must dominate; guard the last ulp of the root.
  return std::pow(c * (1.0 + 1e-12), lattices.empty() ? 1 : lattices.front().M);
}

CheckResult check_ordering(std::span<const LevelLattice> lattices) {
  CheckResult res{"lattice_ordering", true, 0, {}};
  std::ostringstream detail;
  for (std::size_t li = 0; li < lattices.size(); ++li) {
    const auto& lat = lattices[li];
    for (std::size_t k = 1; k < lat.size(); ++k) {
      if (lat.n[k - 1] >= lat.n[k]) {
        if (res.violations++ == 0) detail << "level " << lat.level << " not ascending at position " << k << "; ";
      }
    }
    for (std::size_t lj = li + 1; lj < lattices.size(); ++lj) {
      const auto& hi = lattices[lj];
      if (lat.level >= hi.level) continue;
      // compare the true extremes, not the stored endpoints, so a corrupted order is still judged fairly
      const auto lo_max = *std::max_element(lat.n.begin(), lat.n.end());
      const auto hi_min = *std::min_element(hi.n.begin(), hi.n.end());
      if (lo_max >= hi_min) {
        if (res.violations++ == 0) detail << "max n of level " << lat.level << " >= min n of level " << hi.level << "; ";
      }
    }
  }
  res.passed = res.violations == 0;
  res.detail = res.passed ? "ascending within and across " + std::to_string(lattices.size()) + " levels"
                          : detail.str();
  return res;
}

CheckResult check_block_disjointness(std::span<const LevelLattice> lattices) {
  CheckResult res{"block_disjointness", true, 0, {}};
  std::set<std::uint64_t> indices;
  std::set<std::uint64_t> primes;
  std::size_t total = 0;
  for (const auto& lat : lattices) {
    for (std::size_t j = 0; j < lat.index_sets.size(); ++j) {
      total += lat.index_sets[j].size();
      indices.insert(lat.index_sets[j].begin(), lat.index_sets[j].end());
      primes.insert(lat.prime_blocks[j].begin(), lat.prime_blocks[j].end());
    }
  }
  if (indices.size() != total) res.violations += total - indices.size();
  if (primes.size() != total) res.violations += total - primes.size();
  res.passed = res.violations == 0;
  res.detail = std::to_string(total) + " indices, " + std::to_string(indices.size()) + " distinct; " +
               std::to_string(primes.size()) + " distinct primes";
  return res;
}

CheckResult check_bijection(std::span<const LevelLattice> lattices) {
  CheckResult res{"index_bijection", true, 0, {}};
  std::ostringstream detail;
  std::size_t checked = 0;
  for (const auto& lat : lattices) {
    std::size_t expected = 1;
    for (auto rj : lat.r) expected *= rj;
    if (lat.size() != expected) {
      ++res.violations;
      detail << "level " << lat.level << " has " << lat.size() << " products, expected " << expected << "; ";
    }
    std::vector<std::uint64_t> sorted = lat.n;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      ++res.violations;
      detail << "level " << lat.level << " has repeated n; ";
    }
    for (std::size_t pos = 0; pos < lat.size(); ++pos) {
      auto idx = lat.index(pos);
      std::uint64_t prod = 1;
      for (std::size_t j = 0; j < idx.size(); ++j) prod *= lat.prime_blocks[j][idx[j]];
      if (prod != lat.n[pos]) {
        if (res.violations++ == 0) detail << "level " << lat.level << " position " << pos << " mismatch; ";
      }
      ++checked;
    }
  }
  res.passed = res.violations == 0;
  res.detail = res.passed ? std::to_string(checked) + " products verified" : detail.str();
  return res;
}

CheckResult check_interval_property(std::span<const LevelLattice> lattices) {
  CheckResult res{"interval_property", true, 0, {}};
  std::size_t prefixes = 0;
  for (const auto& lat : lattices) {
    const auto M = static_cast<std::size_t>(lat.M);
    const std::size_t rM = lat.r.back();
    const std::size_t n_prefix = lat.size() / rM;
    // Group the values n(prefix, i_M) by prefix, in mixed-radix prefix order.
    std::vector<std::uint64_t> grid(lat.size(), 0);
    for (std::size_t pos = 0; pos < lat.size(); ++pos) {
      auto idx = lat.index(pos);
      std::size_t key = 0;
      for (std::size_t j = 0; j + 1 < M; ++j) key = key * lat.r[j] + idx[j];
      grid[key * rM + idx[M - 1]] = lat.n[pos];
    }
    std::vector<std::uint32_t> order(rM);
    for (std::size_t pre = 0; pre < n_prefix; ++pre) {
      ++prefixes;
      const std::uint64_t* row = grid.data() + pre * rM;
      std::iota(order.begin(), order.end(), 0u);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return row[a] < row[b]; });
      // Raising P through the sorted values adds one i_M at a time; the set must stay contiguous.
      std::uint32_t lo = order[0], hi = order[0];
      for (std::size_t cnt = 1; cnt <= rM; ++cnt) {
        if (cnt > 1) {
          lo = std::min(lo, order[cnt - 1]);
          hi = std::max(hi, order[cnt - 1]);
        }
        // thresholds strictly between tied values never occur (n distinct), so each prefix of `order` is a threshold set
        if (hi - lo + 1 != cnt) {
          ++res.violations;
          break;
        }
      }
    }
  }
  res.passed = res.violations == 0;
  res.detail = std::to_string(prefixes) + " prefixes scanned over all thresholds";
  return res;
}

}  // namespace bohrgap
