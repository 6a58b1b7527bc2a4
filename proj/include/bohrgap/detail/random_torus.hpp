#ifndef BOHRGAP_DETAIL_RANDOM_TORUS_HPP
#define BOHRGAP_DETAIL_RANDOM_TORUS_HPP

#include <numbers>
#include <random>

namespace bohrgap {

template <class Rng>
TorusPoint random_torus_point(const WalshPolynomial& poly, Rng& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  TorusPoint z;
  z.blocks.reserve(poly.block_sizes().size());
  for (std::size_t rj : poly.block_sizes()) {
    std::vector<cplx> block(rj);
    for (auto& c : block) c = std::polar(1.0, angle(rng));
    z.blocks.push_back(std::move(block));
  }
  return z;
}

}  // namespace bohrgap

#endif  // BOHRGAP_DETAIL_RANDOM_TORUS_HPP
