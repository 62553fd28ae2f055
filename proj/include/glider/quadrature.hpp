#pragma once

#include <array>
#include <cstddef>

namespace glider {

template <std::size_t N>
struct GaussLegendre {
  std::array<double, N> nodes{};    // on [-1, 1]
  std::array<double, N> weights{};
};

/// Nodes and weights from Newton iteration on P_N. Computed once per N.
template <std::size_t N>
const GaussLegendre<N>& gauss_legendre();

extern template const GaussLegendre<32>& gauss_legendre<32>();

}  // namespace glider
