#pragma once

#include <cstddef>
#include <vector>

namespace fttc {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// q-point Gauss-Legendre rule on [a, b]; exact for polynomials of degree < 2q.
QuadratureRule gauss_legendre(std::size_t q, double a = -1.0, double b = 1.0);

/// q-point Gauss-Chebyshev rule of the first kind on [-1, 1] for the weight
/// 1/sqrt(1 - x^2); all weights equal pi/q.
QuadratureRule gauss_chebyshev(std::size_t q);

/// P_0(u) .. P_{count-1}(u), classical normalization P_l(1) = 1.
std::vector<double> legendre_values(std::size_t count, double u);

/// T_0(x) .. T_{count-1}(x) by the three-term recurrence.
std::vector<double> chebyshev_values(std::size_t count, double x);

}  // namespace fttc
