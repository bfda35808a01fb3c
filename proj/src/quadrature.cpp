#include "fttc/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "fttc/error.hpp"

namespace fttc {

std::vector<double> legendre_values(std::size_t count, double u) {
  std::vector<double> p(count);
  if (count > 0) p[0] = 1.0;
  if (count > 1) p[1] = u;
  for (std::size_t l = 1; l + 1 < count; ++l) {
    const double dl = static_cast<double>(l);
    p[l + 1] = ((2.0 * dl + 1.0) * u * p[l] - dl * p[l - 1]) / (dl + 1.0);
  }
  return p;
}

std::vector<double> chebyshev_values(std::size_t count, double x) {
  std::vector<double> t(count);
  if (count > 0) t[0] = 1.0;
  if (count > 1) t[1] = x;
  for (std::size_t k = 1; k + 1 < count; ++k) t[k + 1] = 2.0 * x * t[k] - t[k - 1];
  return t;
}

QuadratureRule gauss_legendre(std::size_t q, double a, double b) {
  if (q == 0) throw_invalid("gauss_legendre: need at least one node");
  if (!(b > a)) throw_invalid("gauss_legendre: need b > a");
  QuadratureRule rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const double n = static_cast<double>(q);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < (q + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_q.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t l = 1; l < q; ++l) {
        const double dl = static_cast<double>(l);
        const double p2 = ((2.0 * dl + 1.0) * x * p1 - dl * p0) / (dl + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = x;
      for (std::size_t l = 1; l < q; ++l) {
        const double dl = static_cast<double>(l);
        const double p2 = ((2.0 * dl + 1.0) * x * p1 - dl * p0) / (dl + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = q == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;
    rule.nodes[q - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[q - 1 - i] = half * w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = mid;
  return rule;
}

QuadratureRule gauss_chebyshev(std::size_t q) {
  if (q == 0) throw_invalid("gauss_chebyshev: need at least one node");
  QuadratureRule rule;
  const double n = static_cast<double>(q);
  for (std::size_t k = 0; k < q; ++k) {
    rule.nodes.push_back(
        std::cos(std::numbers::pi * (2.0 * static_cast<double>(k) + 1.0) / (2.0 * n)));
    rule.weights.push_back(std::numbers::pi / n);
  }
  return rule;
}

}  // namespace fttc
