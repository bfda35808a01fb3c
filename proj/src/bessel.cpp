#include "fttc/bessel.hpp"

#include <cmath>

#include "fttc/error.hpp"

namespace fttc {

std::size_t bessel_start_order(std::size_t n, double x) {
  const auto cx = static_cast<std::size_t>(std::ceil(x));
  const auto margin = static_cast<std::size_t>(std::ceil(8.0 * std::cbrt(x)));
  std::size_t m = std::max(n, cx) + 50 + margin;
  if (m % 2 == 1) ++m;
  return m;
}

BesselTable bessel_j_sequence(std::size_t n, double x) {
  if (n == 0) throw_invalid("bessel_j_sequence: need at least one order");
  if (!(x >= 0.0) || !std::isfinite(x)) {
    throw_invalid("bessel_j_sequence: argument must be finite and non-negative");
  }
  BesselTable table{n, x, std::vector<double>(n, 0.0)};
  if (x == 0.0) {
    table.values[0] = 1.0;
    return table;
  }
  const std::size_t m = bessel_start_order(n, x);
  std::vector<double> j(m + 2, 0.0);
  j[m] = 1e-300;
  constexpr double kBig = 1e250;
  for (std::size_t k = m; k >= 1; --k) {
    j[k - 1] = 2.0 * static_cast<double>(k) / x * j[k] - j[k + 1];
    if (std::abs(j[k - 1]) > kBig) {
      for (std::size_t i = k - 1; i <= m; ++i) j[i] /= kBig;
    }
  }
  double norm = j[0];
  for (std::size_t k = 2; k <= m; k += 2) norm += 2.0 * j[k];
  for (std::size_t k = 0; k < n; ++k) table.values[k] = j[k] / norm;
  return table;
}

}  // namespace fttc
