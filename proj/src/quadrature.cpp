#include "glider/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace glider {

namespace {

template <std::size_t N>
GaussLegendre<N> compute_gauss_legendre() {
  GaussLegendre<N> rule;
  constexpr std::size_t half = (N + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    // Tricomi's initial guess, then Newton on P_N.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(N) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= N; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(N) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[N - 1 - i] = x;
    rule.weights[N - 1 - i] = w;
  }
  return rule;
}

}  // namespace

template <std::size_t N>
const GaussLegendre<N>& gauss_legendre() {
  static const GaussLegendre<N> rule = compute_gauss_legendre<N>();
  return rule;
}

template const GaussLegendre<32>& gauss_legendre<32>();

}  // namespace glider
